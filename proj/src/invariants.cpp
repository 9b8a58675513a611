#include "ekd/invariants.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace ekd {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

// Propagates a face potential from the outer face: w(left) = w(right) + delta
// per arc (delta = 1) or per circle (delta = +-1). `arc_delta` lets callers
// restrict to a sub-curve (deltas 0 elsewhere).
std::map<int, int> propagate(const Diagram& d, const Index& ix,
                             const std::map<int, int>* arc_delta) {
  std::map<int, int> w;
  w[d.outer_face] = 0;
  struct Edge {
    int a, b, delta;
  };
  std::vector<Edge> edges;
  for (const Arc& a : d.arcs) {
    int delta = 1;
    if (arc_delta) {
      auto it = arc_delta->find(a.id);
      delta = it == arc_delta->end() ? 0 : it->second;
    }
    edges.push_back({ix.left_face(a), ix.right_face(a), delta});
  }
  for (const Circle& c : d.circles) {
    int delta = arc_delta ? 0 : (c.positive ? 1 : -1);
    edges.push_back({c.inside_face, c.outside_face, delta});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : edges) {
      auto ia = w.find(e.a), ib = w.find(e.b);
      if (ia != w.end() && ib == w.end()) {
        w[e.b] = ia->second - e.delta;
        changed = true;
      } else if (ib != w.end() && ia == w.end()) {
        w[e.a] = ib->second + e.delta;
        changed = true;
      } else if (ia != w.end() && ib != w.end() && ia->second != ib->second + e.delta) {
        throw std::invalid_argument("winding cocycle inconsistent");
      }
    }
  }
  return w;
}

// Continue along the strand through a crossing: head dart in, tail dart out.
int strand_continue(const Index& ix, int head_dart) {
  return ix.dart_at(ix.crossing_of(head_dart), ix.slot_of(head_dart) + 2);
}

// Arc ids traversed from `tail_dart` until an arc whose head is `stop_head`.
std::vector<int> walk_until(const Index& ix, int tail_dart, int stop_head) {
  std::vector<int> arcs;
  int t = tail_dart;
  for (std::size_t guard = 0; guard <= ix.diagram().arcs.size(); ++guard) {
    const Arc& a = ix.arc(ix.arc_of(t));
    arcs.push_back(a.id);
    if (a.head == stop_head) return arcs;
    t = strand_continue(ix, a.head);
  }
  throw std::invalid_argument("strand walk does not close");
}

}  // namespace

WindingAssignment winding_numbers(const Diagram& d) {
  ensure_valid(d);
  Index ix(d);
  return propagate(d, ix, nullptr);
}

Rational total_signed_area(const Diagram& d) {
  WindingAssignment w = winding_numbers(d);
  Rational total = 0;
  for (const Face& f : d.faces)
    if (f.area) total += Rational(w.at(f.id)) * *f.area;
  return total;
}

Rational knot_area(const Diagram& d) {
  Rational t = total_signed_area(d);
  return t < 0 ? Rational(-t) : t;
}

bool is_exact(const Diagram& d) { return total_signed_area(d) == 0; }

int writhe(const Diagram& d) {
  ensure_valid(d);
  Index ix(d);
  int total = 0;
  for (const Crossing& c : d.crossings) {
    int out_even = ix.is_tail(c.darts[0]) ? 0 : 2;
    int out_odd = ix.is_tail(c.darts[1]) ? 1 : 3;
    bool even_over = c.sign0 == -1;
    int over = even_over ? out_even : out_odd;
    int under = even_over ? out_odd : out_even;
    total += (under == mod4(over + 1)) ? 1 : -1;
  }
  return total;
}

int rotation_number(const Diagram& d, int component) {
  Diagram sub = extract_component(d, component);
  Index ix(sub);
  if (sub.crossings.empty()) {
    if (sub.circles.size() != 1) throw std::invalid_argument("degenerate component");
    return sub.circles[0].positive ? 1 : -1;
  }
  // Base point on the unbounded region: smallest dart on the outer boundary.
  const Face& outer = ix.face(sub.outer_face);
  int base = -1;
  for (const auto& cyc : outer.cycles)
    for (int dart : cyc)
      if (base < 0 || dart < base) base = dart;
  if (base < 0) throw std::invalid_argument("outer face of a knot diagram has no boundary");
  int mu = ix.is_tail(base) ? -1 : +1;

  // Traverse the component from the base arc and record, per crossing, the
  // outgoing slot of each of the two visits.
  std::map<int, std::vector<int>> outs;
  int start_arc = ix.arc_of(base);
  int arc = start_arc;
  do {
    const Arc& a = ix.arc(arc);
    int cont = strand_continue(ix, a.head);
    outs[ix.crossing_of(a.head)].push_back(ix.slot_of(cont));
    arc = ix.arc_of(cont);
  } while (arc != start_arc);

  int eps = 0;
  for (const auto& [crossing, slots] : outs) {
    if (slots.size() != 2) throw std::invalid_argument("crossing not visited twice");
    eps += (slots[0] == mod4(slots[1] + 1)) ? 1 : -1;
  }
  return mu + eps;
}

std::vector<int> rotation_numbers(const Diagram& d) {
  std::vector<int> out;
  for (int c : d.components) out.push_back(rotation_number(d, c));
  return out;
}

namespace {

EulerReading make_reading(int chi, int boundary) {
  EulerReading r;
  r.chi = chi;
  int num = 2 - boundary - chi;  // = 2g
  r.feasible = num >= 0 && num % 2 == 0;
  if (r.feasible) r.genus = num / 2;
  for (int g = 0; g <= 3; ++g)
    for (int b = boundary; b <= boundary + 6; ++b)
      if (2 - 2 * g - b == chi) r.gb_witnesses.push_back({g, b});
  return r;
}

}  // namespace

EulerReport forced_euler_characteristic(const Diagram& lower, const Diagram& upper) {
  EulerReport rep;
  rep.writhe_lower = writhe(lower);
  rep.writhe_upper = writhe(upper);
  int boundary = static_cast<int>(lower.components.size() + upper.components.size());
  rep.plus = make_reading(rep.writhe_lower - rep.writhe_upper, boundary);
  rep.minus = make_reading(rep.writhe_upper - rep.writhe_lower, boundary);
  rep.feasible_either = rep.plus.feasible || rep.minus.feasible;
  rep.cylinder = rep.writhe_lower == rep.writhe_upper && lower.components.size() == 1 &&
                 upper.components.size() == 1;
  return rep;
}

LegendrianReport legendrian_representable(const Diagram& d) {
  ensure_valid(d);
  if (d.components.size() != 1)
    throw std::invalid_argument("Legendrian criterion is stated for knots");
  Index ix(d);
  LegendrianReport rep;
  rep.total = total_signed_area(d);
  rep.exact = rep.total == 0;

  bool all_ok = true;
  for (const Crossing& c : d.crossings) {
    // The two loops based at this crossing: leave via one passage's tail,
    // return via the other passage's head.
    int tail_even = ix.is_tail(c.darts[0]) ? c.darts[0] : c.darts[2];
    int tail_odd = ix.is_tail(c.darts[1]) ? c.darts[1] : c.darts[3];
    int head_even = ix.is_tail(c.darts[0]) ? c.darts[2] : c.darts[0];
    int head_odd = ix.is_tail(c.darts[1]) ? c.darts[3] : c.darts[1];
    for (auto [t, h] : {std::pair{tail_even, head_odd}, std::pair{tail_odd, head_even}}) {
      std::vector<int> loop = walk_until(ix, t, h);
      std::map<int, int> delta;
      for (int a : loop) delta[a] = 1;
      std::map<int, int> w = propagate(d, ix, &delta);
      Rational area = 0;
      for (const Face& f : d.faces)
        if (f.area) area += Rational(w.at(f.id)) * *f.area;

      // Wedge quadrant of the loop: rays at the tail and head slots are
      // cyclically adjacent. Anticlockwise around that corner the walk comes
      // in via slot k+1 and leaves via slot k; it agrees with the component
      // orientation exactly when the outgoing ray is the loop's tail.
      int st = ix.slot_of(t), sh = ix.slot_of(h);
      int k, agreement;
      if (sh == mod4(st + 1)) {
        k = st;
        agreement = +1;  // out-ray k is the tail
      } else {
        k = sh;
        agreement = -1;  // out-ray k is the head; corner parametrization reversed
      }
      LegendrianCrossingCheck chk;
      chk.crossing = c.id;
      chk.wedge_quadrant = k;
      chk.sigma = ix.quadrant_sign(c.id, k);
      chk.loop_area = Rational(agreement) * area;
      chk.ok = (chk.loop_area > 0 && chk.sigma == 1) || (chk.loop_area < 0 && chk.sigma == -1);
      all_ok = all_ok && chk.ok;
      rep.crossings.push_back(chk);
    }
  }
  rep.representable = rep.exact && all_ok;
  return rep;
}

Diagram extract_component(const Diagram& d, int component) {
  ensure_valid(d);
  if (std::find(d.components.begin(), d.components.end(), component) == d.components.end())
    throw std::invalid_argument("unknown component");
  Index ix(d);

  bool pure = d.components.size() == 1;
  if (pure && d.circles.empty()) return d;
  if (pure && d.crossings.empty()) return d;

  // Which crossings are self-crossings of this component?
  auto dart_component = [&](int dart) { return ix.arc(ix.arc_of(dart)).component; };
  std::set<int> kept;
  for (const Crossing& c : d.crossings) {
    bool even_on = dart_component(c.darts[0]) == component;
    bool odd_on = dart_component(c.darts[1]) == component;
    if (even_on && odd_on) kept.insert(c.id);
  }

  // Merge faces across every arc not on this component.
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Face& f : d.faces) parent[f.id] = f.id;
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  };
  for (const Arc& a : d.arcs)
    if (a.component != component) unite(ix.left_face(a), ix.right_face(a));
  for (const Circle& c : d.circles)
    if (c.component != component) unite(c.inside_face, c.outside_face);

  Diagram out;
  out.components = {component};
  std::map<int, Rational> group_area;
  std::set<int> group_unbounded;
  for (const Face& f : d.faces) {
    int g = find(f.id);
    if (f.area)
      group_area[g] += *f.area;
    else
      group_unbounded.insert(g);
  }

  for (const Crossing& c : d.crossings)
    if (kept.count(c.id)) out.crossings.push_back(c);

  // Merge runs of arcs through smoothed crossings.
  std::map<int, std::vector<int>> group_cycles;
  if (!kept.empty()) {
    std::set<int> seen;
    for (const Arc& a : d.arcs) {
      if (a.component != component || seen.count(a.id)) continue;
      if (!kept.count(ix.crossing_of(a.tail))) continue;  // start runs at kept crossings only
      Arc merged;
      merged.id = a.id;
      merged.tail = a.tail;
      merged.component = component;
      int cur = a.id;
      for (;;) {
        seen.insert(cur);
        const Arc& arc = ix.arc(cur);
        if (kept.count(ix.crossing_of(arc.head))) {
          merged.head = arc.head;
          break;
        }
        cur = ix.arc_of(strand_continue(ix, arc.head));
      }
      out.arcs.push_back(merged);
    }
  } else {
    // The component becomes a crossing-free circle bounded by its arc run.
    // Sides: the left/right face groups of any of its arcs.
    const Arc* any = nullptr;
    for (const Arc& a : d.arcs)
      if (a.component == component) {
        any = &a;
        break;
      }
    Circle circ;
    if (any) {
      int left = find(ix.left_face(*any)), right = find(ix.right_face(*any));
      bool left_unbounded = group_unbounded.count(left) != 0;
      circ.id = 0;
      circ.component = component;
      circ.inside_face = left_unbounded ? right : left;
      circ.outside_face = left_unbounded ? left : right;
      circ.positive = !left_unbounded;  // w(left) = w(right) + 1
      out.circles.push_back(circ);
    } else {
      // Already a circle in the input.
      for (const Circle& c : d.circles)
        if (c.component == component) {
          circ = c;
          circ.inside_face = find(c.inside_face);
          circ.outside_face = find(c.outside_face);
          out.circles.push_back(circ);
        }
    }
  }

  // Rebuild face cycles as orbits of the new face permutation.
  std::map<int, std::pair<int, int>> where;
  for (const Crossing& c : out.crossings)
    for (int s = 0; s < 4; ++s) where[c.darts[s]] = {c.id, s};
  std::map<int, std::pair<int, bool>> dart_arc;  // dart -> (arc id, is_tail)
  for (const Arc& a : out.arcs) {
    dart_arc[a.tail] = {a.id, true};
    dart_arc[a.head] = {a.id, false};
  }
  std::map<int, int> arc_pos;
  for (std::size_t i = 0; i < out.arcs.size(); ++i) arc_pos[out.arcs[i].id] = static_cast<int>(i);
  std::map<int, int> cross_pos;
  for (std::size_t i = 0; i < out.crossings.size(); ++i)
    cross_pos[out.crossings[i].id] = static_cast<int>(i);
  auto succ = [&](int dart) {
    auto [aid, tail] = dart_arc.at(dart);
    const Arc& a = out.arcs[arc_pos.at(aid)];
    int e = tail ? a.head : a.tail;
    auto [cid, slot] = where.at(e);
    return out.crossings[cross_pos.at(cid)].darts[mod4(slot - 1)];
  };
  std::set<int> done;
  for (const auto& [dart, loc] : where) {
    if (done.count(dart)) continue;
    std::vector<int> cycle;
    int cur = dart;
    do {
      cycle.push_back(cur);
      done.insert(cur);
      cur = succ(cur);
    } while (cur != dart);
    int group = find(ix.face_of_dart(cycle[0]));
    group_cycles[group].insert(group_cycles[group].end(), cycle.begin(), cycle.end());
  }

  // Emit one face per surviving group, cycles split back into orbits.
  std::set<int> groups;
  for (const Face& f : d.faces) groups.insert(find(f.id));
  for (int g : groups) {
    Face f;
    f.id = g;
    if (!group_unbounded.count(g)) f.area = group_area[g];
    // Re-split this group's darts into orbit cycles.
    std::set<int> mine(group_cycles[g].begin(), group_cycles[g].end());
    std::set<int> used;
    for (int dart : mine) {
      if (used.count(dart)) continue;
      std::vector<int> cycle;
      int cur = dart;
      do {
        cycle.push_back(cur);
        used.insert(cur);
        cur = succ(cur);
      } while (cur != dart);
      f.cycles.push_back(cycle);
    }
    out.faces.push_back(f);
  }
  for (int g : group_unbounded) out.outer_face = g;

  // Remap circle faces in the crossing-free case (groups already final).
  ensure_valid(out);
  return out;
}

}  // namespace ekd
