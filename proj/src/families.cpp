#include "ekd/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "ekd/invariants.hpp"

namespace ekd {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

Rational approx(double v) {
  return Rational(static_cast<long long>(std::llround(v * 100)), 100);
}

std::pair<Rational, Rational> approx_pt(double x, double y) { return {approx(x), approx(y)}; }

// Attaches faces given (face id, area, representative dart). Every orbit must
// be claimed by exactly one face.
void attach_faces(Diagram& d,
                  const std::vector<std::tuple<int, std::optional<Rational>, int>>& reps) {
  auto orbits = face_orbits(d.crossings, d.arcs);
  std::vector<bool> used(orbits.size(), false);
  for (const auto& [id, area, rep] : reps) {
    Face f;
    f.id = id;
    f.area = area;
    bool found = false;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      if (std::find(orbits[i].begin(), orbits[i].end(), rep) != orbits[i].end()) {
        if (used[i]) throw std::logic_error("two faces claim one orbit");
        f.cycles.push_back(orbits[i]);
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("face representative dart not found");
    d.faces.push_back(f);
  }
  for (bool u : used)
    if (!u) throw std::logic_error("unclaimed face orbit in builder");
}

void require_sign(int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("sign parameter must be +1 or -1");
}

void require_positive(const Rational& a, const char* what) {
  if (a <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

Diagram build_unknot(const Rational& area) {
  require_positive(area, "unknot area");
  Diagram d;
  d.components = {0};
  Circle c;
  c.id = 0;
  c.component = 0;
  c.inside_face = 0;
  c.outside_face = 1;
  c.positive = true;
  d.circles.push_back(c);
  Face inside, outer;
  inside.id = 0;
  inside.area = area;
  outer.id = 1;
  d.faces = {inside, outer};
  d.outer_face = 1;
  Layout lay;
  lay.circles[0] = {Rational(0), Rational(0), Rational(1)};
  lay.faces[0] = {Rational(0), Rational(0)};
  d.layout = lay;
  return d;
}

// Open chain of n lobes along the curve (cos t, sin nt): n-1 crossings at
// x = cos(k pi / n), lobes with alternating windings +1, -1, ... from the
// east teardrop. signs[k-1] is the sign of the lobe quadrants at crossing k.
Diagram build_chain(const std::vector<int>& signs, const std::vector<Rational>& lobe_areas) {
  const int n = static_cast<int>(lobe_areas.size());
  if (n < 2) throw std::invalid_argument("chain needs at least two lobes");
  if (static_cast<int>(signs.size()) != n - 1)
    throw std::invalid_argument("chain needs one sign per crossing");
  for (int s : signs) require_sign(s);
  for (const Rational& a : lobe_areas) require_positive(a, "lobe area");

  Diagram d;
  d.components = {0};
  // Crossing k (1-based) has darts 4(k-1)..4(k-1)+3 at slots 0..3.
  auto dart = [](int k, int slot) { return 4 * (k - 1) + mod4(slot); };
  // Slot roles depend on the parity of k (direction of the forward pass).
  auto a_in = [&](int k) { return dart(k, k % 2 ? 0 : 3); };
  auto a_out = [&](int k) { return dart(k, k % 2 ? 2 : 1); };
  auto b_in = [&](int k) { return dart(k, k % 2 ? 1 : 2); };
  auto b_out = [&](int k) { return dart(k, k % 2 ? 3 : 0); };

  for (int k = 1; k <= n - 1; ++k) {
    Crossing c;
    c.id = k - 1;
    for (int s = 0; s < 4; ++s) c.darts[s] = dart(k, s);
    c.sign0 = -signs[k - 1];  // lobe quadrants are the odd ones
    d.crossings.push_back(c);
  }

  int arc_id = 0;
  auto add_arc = [&](int tail, int head) {
    Arc a;
    a.id = arc_id++;
    a.tail = tail;
    a.head = head;
    a.component = 0;
    d.arcs.push_back(a);
    return a.id;
  };
  int east = add_arc(b_out(1), a_in(1));  // lobe 1 boundary
  std::vector<int> forward, back;
  for (int k = 1; k <= n - 2; ++k) forward.push_back(add_arc(a_out(k), a_in(k + 1)));
  int west = add_arc(a_out(n - 1), b_in(n - 1));  // lobe n boundary
  for (int k = n - 2; k >= 1; --k) back.push_back(add_arc(b_out(k + 1), b_in(k)));

  std::vector<std::tuple<int, std::optional<Rational>, int>> reps;
  reps.push_back({0, lobe_areas[0], dart(1, 3)});  // east lobe = quadrant 3 at q1
  for (int j = 2; j <= n - 1; ++j)
    reps.push_back({j - 1, lobe_areas[j - 1], dart(j - 1, 1)});  // west quadrant at q_{j-1}
  reps.push_back({n - 1, lobe_areas[n - 1], dart(n - 1, 1)});
  reps.push_back({n, std::nullopt, dart(1, 0)});
  attach_faces(d, reps);
  d.outer_face = n;

  // Layout sampled from the Lissajous curve.
  Layout lay;
  const double pi = 3.14159265358979323846;
  const double sx = 3.0, sy = 1.5;
  auto pos = [&](double t) {
    return approx_pt(sx * std::cos(t), sy * std::sin(n * t));
  };
  for (int k = 1; k <= n - 1; ++k) lay.crossings[k - 1] = approx_pt(sx * std::cos(k * pi / n), 0);
  auto sample = [&](int arc, double t0, double t1) {
    std::vector<std::pair<Rational, Rational>> pts;
    const int m = 7;
    for (int i = 1; i < m; ++i) pts.push_back(pos(t0 + (t1 - t0) * i / m));
    lay.arcs[arc] = pts;
  };
  sample(east, 2 * pi - pi / n, 2 * pi + pi / n);
  for (int k = 1; k <= n - 2; ++k) sample(forward[k - 1], k * pi / n, (k + 1) * pi / n);
  sample(west, (n - 1) * pi / n, (n + 1) * pi / n);
  for (int k = n - 2; k >= 1; --k)
    sample(back[n - 2 - k], 2 * pi - (k + 1) * pi / n, 2 * pi - k * pi / n);
  auto cx = [&](int j) {  // anchor x for lobe j (1-based)
    double hi = j == 1 ? 1.0 : std::cos((j - 1) * pi / n);
    double lo = j == n ? -1.0 : std::cos(j * pi / n);
    return sx * (hi + lo) / 2;
  };
  for (int j = 1; j <= n; ++j) lay.faces[j - 1] = approx_pt(cx(j), 0);
  d.layout = lay;
  return d;
}

Diagram build_eight(int sign, const Rational& area) {
  require_sign(sign);
  return build_chain({sign}, {area, area});
}

Diagram build_e_diagram(int sign, const Rational& marked, const Rational& far_lobe) {
  require_sign(sign);
  require_positive(marked, "marked lobe area");
  require_positive(far_lobe, "far lobe area");
  // Exact 3-lobe chain: windings +1, -1, +1, middle lobe = sum of the others.
  return build_chain({sign, -sign}, {marked, marked + far_lobe, far_lobe});
}

// Standard 3-crossing trefoil curve ((2+cos3t)cos2t, (2+cos3t)sin2t):
// crossings at polar angles 60, 180, 300 degrees; three petals (winding 1)
// and the doubly-covered center (winding 2). sign is the center/outer
// quadrant sign; sign = -1 gives writhe -3.
Diagram build_trefoil(int sign, const std::array<Rational, 3>& lobes, const Rational& center) {
  require_sign(sign);
  for (const Rational& l : lobes) require_positive(l, "trefoil lobe area");
  require_positive(center, "trefoil center area");

  Diagram d;
  d.components = {0};
  // Slots (counterclockwise): 0 = inward passage out-dart, 1 = outward
  // passage in-dart, 2 = inward in-dart, 3 = outward out-dart.
  auto dart = [](int q, int slot) { return 4 * q + mod4(slot); };
  for (int q = 0; q < 3; ++q) {
    Crossing c;
    c.id = q;
    for (int s = 0; s < 4; ++s) c.darts[s] = dart(q, s);
    c.sign0 = sign;  // center occupies quadrant 0
    d.crossings.push_back(c);
  }
  // Crossings 0,1,2 = q_a (60deg), q_b (180deg), q_c (300deg).
  int arc_id = 0;
  auto add_arc = [&](int tail, int head) {
    Arc a;
    a.id = arc_id++;
    a.tail = tail;
    a.head = head;
    a.component = 0;
    d.arcs.push_back(a);
    return a.id;
  };
  int a1 = add_arc(dart(0, 0), dart(1, 1));  // inner a->b
  int a2 = add_arc(dart(1, 3), dart(2, 2));  // outer b->c
  int a3 = add_arc(dart(2, 0), dart(0, 1));  // inner c->a
  int a4 = add_arc(dart(0, 3), dart(1, 2));  // outer a->b
  int a5 = add_arc(dart(1, 0), dart(2, 1));  // inner b->c
  int a6 = add_arc(dart(2, 3), dart(0, 2));  // outer c->a

  std::vector<std::tuple<int, std::optional<Rational>, int>> reps;
  reps.push_back({0, lobes[0], dart(0, 1)});    // petal between q_c and q_a (at 0 deg)
  reps.push_back({1, lobes[1], dart(1, 1)});    // petal at 120 deg
  reps.push_back({2, lobes[2], dart(2, 1)});    // petal at 240 deg
  reps.push_back({3, center, dart(0, 0)});      // center
  reps.push_back({4, std::nullopt, dart(0, 2)});
  attach_faces(d, reps);
  d.outer_face = 4;

  Layout lay;
  const double pi = 3.14159265358979323846;
  auto pos = [&](double t) {
    double r = 2 + std::cos(3 * t);
    return approx_pt(r * std::cos(2 * t), r * std::sin(2 * t));
  };
  lay.crossings[0] = approx_pt(2 * std::cos(pi / 3), 2 * std::sin(pi / 3));
  lay.crossings[1] = approx_pt(-2, 0);
  lay.crossings[2] = approx_pt(2 * std::cos(-pi / 3), 2 * std::sin(-pi / 3));
  auto sample = [&](int arc, double t0, double t1) {
    std::vector<std::pair<Rational, Rational>> pts;
    const int m = 8;
    for (int i = 1; i < m; ++i) pts.push_back(pos(t0 + (t1 - t0) * i / m));
    lay.arcs[arc] = pts;
  };
  sample(a1, pi / 6, pi / 2);
  sample(a2, pi / 2, 5 * pi / 6);
  sample(a3, 5 * pi / 6, 7 * pi / 6);
  sample(a4, 7 * pi / 6, 3 * pi / 2);
  sample(a5, 3 * pi / 2, 11 * pi / 6);
  sample(a6, 11 * pi / 6, 13 * pi / 6);
  lay.faces[0] = approx_pt(2, 0);
  lay.faces[1] = approx_pt(-1, 1.73);
  lay.faces[2] = approx_pt(-1, -1.73);
  lay.faces[3] = approx_pt(0, 0);
  d.layout = lay;
  return d;
}

Diagram build(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::Unknot:
      if (spec.areas.size() != 1) throw std::invalid_argument("unknot takes one area");
      return build_unknot(spec.areas[0]);
    case Family::Eight:
      if (spec.signs.size() != 1 || spec.areas.size() != 1)
        throw std::invalid_argument("eight takes one sign and one area");
      return build_eight(spec.signs[0], spec.areas[0]);
    case Family::EDiagram: {
      if (spec.signs.size() != 1 || spec.areas.empty() || spec.areas.size() > 2)
        throw std::invalid_argument("E diagram takes one sign and one or two areas");
      Rational far_lobe = spec.areas.size() == 2 ? spec.areas[1] : Rational(4);
      return build_e_diagram(spec.signs[0], spec.areas[0], far_lobe);
    }
    case Family::Chain: {
      if (spec.signs.size() != 3 || spec.areas.size() != 3)
        throw std::invalid_argument("chain takes three signs and three areas");
      Rational a4 = spec.areas[0] - spec.areas[1] + spec.areas[2];
      if (a4 <= 0)
        throw std::invalid_argument("chain areas infeasible: derived fourth lobe " +
                                    to_string(a4) + " is not positive");
      return build_chain(spec.signs, {spec.areas[0], spec.areas[1], spec.areas[2], a4});
    }
    case Family::Trefoil: {
      if (spec.signs.size() != 1 || spec.areas.size() != 4)
        throw std::invalid_argument("trefoil takes one sign and four areas (l1 l2 l3 center)");
      return build_trefoil(spec.signs[0], {spec.areas[0], spec.areas[1], spec.areas[2]},
                           spec.areas[3]);
    }
  }
  throw std::invalid_argument("unknown family");
}

std::vector<std::pair<std::string, Diagram>> corpus() {
  std::vector<std::pair<std::string, Diagram>> out;
  out.push_back({"unknot(1)", build_unknot(1)});
  out.push_back({"unknot(5/2)", build_unknot(Rational(5, 2))});
  out.push_back({"8+(1)", build_eight(+1, 1)});
  out.push_back({"8+(2)", build_eight(+1, 2)});
  out.push_back({"8-(1)", build_eight(-1, 1)});
  out.push_back({"8-(2)", build_eight(-1, 2)});
  out.push_back({"E-(1)", build_e_diagram(-1, 1, 4)});
  out.push_back({"E+(1)", build_e_diagram(+1, 1, 4)});
  out.push_back({"C-++(1,2,3)", build({Family::Chain, {-1, +1, +1}, {1, 2, 3}})});
  out.push_back({"C-++(4,3,2)", build({Family::Chain, {-1, +1, +1}, {4, 3, 2}})});
  out.push_back({"C+-+(1,2,2)", build({Family::Chain, {+1, -1, +1}, {1, 2, 2}})});
  out.push_back({"T-(3,3,3;1)", build_trefoil(-1, {3, 3, 3}, 1)});
  out.push_back({"T+(3,3,3;1)", build_trefoil(+1, {3, 3, 3}, 1)});
  return out;
}

}  // namespace ekd
