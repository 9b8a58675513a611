#include "ekd/moves.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "ekd/invariants.hpp"
#include "json.hpp"

namespace ekd {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

int fresh_crossing_id(const Diagram& d) {
  int m = 0;
  for (const Crossing& c : d.crossings) m = std::max(m, c.id + 1);
  return m;
}
int fresh_dart_id(const Diagram& d) {
  int m = 0;
  for (const Crossing& c : d.crossings)
    for (int s = 0; s < 4; ++s) m = std::max(m, c.darts[s] + 1);
  return m;
}
int fresh_arc_id(const Diagram& d) {
  int m = 0;
  for (const Arc& a : d.arcs) m = std::max(m, a.id + 1);
  return m;
}
int fresh_face_id(const Diagram& d) {
  int m = 0;
  for (const Face& f : d.faces) m = std::max(m, f.id + 1);
  return m;
}
int fresh_circle_id(const Diagram& d) {
  int m = 0;
  for (const Circle& c : d.circles) m = std::max(m, c.id + 1);
  return m;
}
int fresh_component_id(const Diagram& d) {
  int m = 0;
  for (int c : d.components) m = std::max(m, c + 1);
  return m;
}

struct SignPanel {
  int corners = 0;
  bool all_pos = true;
  bool all_neg = true;
};

SignPanel face_panel(const Diagram& d, const Index& ix, int face) {
  SignPanel p;
  for (const Crossing& c : d.crossings)
    for (int k = 0; k < 4; ++k)
      if (ix.quadrant_face(c.id, k) == face) {
        p.corners++;
        (ix.quadrant_sign(c.id, k) > 0 ? p.all_neg : p.all_pos) = false;
      }
  return p;
}

// Conditions 2-4 on the surviving faces' area changes; faces that do not
// survive the move are exempt.
void check_epsilon_conditions(const Diagram& d, const Index& ix,
                              const std::map<int, Rational>& eps,
                              const std::set<int>& dying = {}) {
  for (const auto& [face, e] : eps) {
    if (!ix.has_face(face) || face == d.outer_face || dying.count(face))
      throw MoveError("epsilons",
                      "face " + std::to_string(face) + " is not a surviving bounded face");
    const Face& f = ix.face(face);
    if (*f.area + e <= 0)
      throw MoveError("condition 2",
                      "face " + std::to_string(face) + " would get non-positive area");
  }
  for (const Face& f : d.faces) {
    if (!f.area || dying.count(f.id)) continue;
    SignPanel p = face_panel(d, ix, f.id);
    if (p.corners == 0) continue;
    auto it = eps.find(f.id);
    Rational e = it == eps.end() ? Rational(0) : it->second;
    if (p.all_pos && e <= 0)
      throw MoveError("condition 3", "face " + std::to_string(f.id) +
                                         " has only positive corners and must strictly grow");
    if (p.all_neg && e >= 0)
      throw MoveError("condition 4", "face " + std::to_string(f.id) +
                                         " has only negative corners and must strictly shrink");
  }
}

struct NewFaceSpec {
  int id;
  Rational area;
  int rep_dart;
};

struct RewriteSpec {
  Diagram skeleton;  // crossings/arcs/circles/components of the result
  std::map<int, int> redirect;  // dying face -> surviving face absorbing it
  std::set<int> killed;         // faces that vanish outright
  std::set<int> novote;         // surviving faces whose old darts may not vote
  std::vector<NewFaceSpec> created;
  std::map<int, int> pins;  // dart -> face id, for orbits without usable votes
};

int resolve(const std::map<int, int>& redirect, int face) {
  auto it = redirect.find(face);
  while (it != redirect.end()) {
    face = it->second;
    it = redirect.find(face);
  }
  return face;
}

// Reassembles the face structure of a rewritten skeleton: orbits are matched
// to created faces by representative darts, to survivors by the old faces of
// their persisting darts.
Diagram finish_rewrite(const Diagram& old, const Index& oldix, RewriteSpec spec,
                       const std::map<int, Rational>& eps) {
  Diagram out = std::move(spec.skeleton);
  auto orbits = face_orbits(out.crossings, out.arcs);

  std::map<int, NewFaceSpec*> rep_of;
  for (NewFaceSpec& nf : spec.created) rep_of[nf.rep_dart] = &nf;

  // A dart votes through its arc side: arc identity persists across
  // re-attachments, so the old left/right face of the same arc id tracks the
  // region continuously even when the dart moved to another crossing.
  std::map<int, std::pair<int, bool>> new_role;  // dart -> (arc id, is_tail)
  for (const Arc& a : out.arcs) {
    new_role[a.tail] = {a.id, true};
    new_role[a.head] = {a.id, false};
  }
  std::map<int, std::pair<int, int>> old_sides;  // arc id -> (left face, right face)
  for (const Arc& a : old.arcs) old_sides[a.id] = {oldix.left_face(a), oldix.right_face(a)};

  std::map<int, std::vector<std::vector<int>>> cycles_of;  // face id -> cycles
  for (const auto& orbit : orbits) {
    std::optional<int> target;
    for (int dart : orbit) {
      auto pin = spec.pins.find(dart);
      if (pin != spec.pins.end()) target = pin->second;
      auto rep = rep_of.find(dart);
      if (rep != rep_of.end()) target = rep->second->id;
    }
    if (!target) {
      for (int dart : orbit) {
        auto role = new_role.find(dart);
        if (role == new_role.end()) continue;
        auto sides = old_sides.find(role->second.first);
        if (sides == old_sides.end()) continue;  // newly created arc
        int of = resolve(spec.redirect,
                         role->second.second ? sides->second.first : sides->second.second);
        if (spec.killed.count(of) || spec.novote.count(of)) continue;
        if (target && *target != of)
          throw MoveError("rewrite", "face orbit votes disagree (" + std::to_string(*target) +
                                         " vs " + std::to_string(of) + ")");
        target = of;
      }
    }
    if (!target) throw MoveError("rewrite", "face orbit has no owner");
    cycles_of[*target].push_back(orbit);
  }

  // Survivors keep identity and absorb redirected areas and epsilons.
  for (const Face& f : old.faces) {
    if (spec.killed.count(f.id) || spec.redirect.count(f.id)) continue;
    Face nf;
    nf.id = f.id;
    nf.cycles = cycles_of[f.id];
    if (f.area) {
      Rational area = *f.area;
      for (const auto& [from, to] : spec.redirect)
        if (resolve(spec.redirect, from) == f.id) {
          const Face& dying = oldix.face(from);
          if (dying.area) area += *dying.area;
        }
      auto it = eps.find(f.id);
      if (it != eps.end()) area += it->second;
      nf.area = area;
    } else {
      // outer face may absorb bounded faces without gaining an area
    }
    out.faces.push_back(nf);
  }
  for (const NewFaceSpec& nf : spec.created) {
    Face f;
    f.id = nf.id;
    f.cycles = cycles_of[nf.id];
    f.area = nf.area;
    out.faces.push_back(f);
  }
  // Circles carried in the skeleton may reference dying faces.
  for (Circle& c : out.circles) {
    c.inside_face = resolve(spec.redirect, c.inside_face);
    c.outside_face = resolve(spec.redirect, c.outside_face);
  }
  out.outer_face = resolve(spec.redirect, old.outer_face);
  return out;
}

void check_conservation(const Diagram& before, const Diagram& after) {
  ValidationReport rep = validate(after);
  if (!rep.ok()) throw MoveError("validation", rep.joined());
  if (total_signed_area(before) != total_signed_area(after))
    throw MoveError("condition 1", "total signed area changed from " +
                                       to_string(total_signed_area(before)) + " to " +
                                       to_string(total_signed_area(after)));
}

// ---- R0 ----------------------------------------------------------------

Diagram apply_r0(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  check_epsilon_conditions(d, ix, inst.epsilons);
  Diagram out = d;
  for (Face& f : out.faces) {
    auto it = inst.epsilons.find(f.id);
    if (it == inst.epsilons.end()) continue;
    if (!f.area) throw MoveError("epsilons", "outer face has no area");
    f.area = *f.area + it->second;
  }
  check_conservation(d, out);
  return out;
}

// ---- R1 ----------------------------------------------------------------

Diagram apply_r1_plus(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  if (inst.side != 1 && inst.side != -1) throw MoveError("site", "R1+ needs side +1 or -1");
  if (inst.delta <= 0) throw MoveError("site", "R1+ lobe area must be positive");
  const Arc& a = ix.arc(inst.arc);
  check_epsilon_conditions(d, ix, inst.epsilons);

  int Q = fresh_crossing_id(d);
  int d0 = fresh_dart_id(d);
  std::array<int, 4> darts = {d0, d0 + 1, d0 + 2, d0 + 3};
  int a2_id = fresh_arc_id(d), loop_id = a2_id + 1;
  int lobe_id = fresh_face_id(d);

  // Slot layout: poking left, the loop occupies quadrant 0; poking right,
  // quadrant 2. The lobe sign is +1 either way.
  int t_loop, h_loop, h_in, t_out;
  if (inst.side == 1) {
    t_loop = darts[0];
    h_loop = darts[1];
    h_in = darts[2];
    t_out = darts[3];
  } else {
    t_out = darts[0];
    h_in = darts[1];
    h_loop = darts[2];
    t_loop = darts[3];
  }

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  Crossing c;
  c.id = Q;
  c.darts = darts;
  c.sign0 = +1;
  spec.skeleton.crossings.push_back(c);
  for (Arc& arc : spec.skeleton.arcs)
    if (arc.id == inst.arc) arc.head = h_in;
  Arc a2;
  a2.id = a2_id;
  a2.tail = t_out;
  a2.head = a.head;
  a2.component = a.component;
  spec.skeleton.arcs.push_back(a2);
  Arc loop;
  loop.id = loop_id;
  loop.tail = t_loop;
  loop.head = h_loop;
  loop.component = a.component;
  spec.skeleton.arcs.push_back(loop);

  spec.created.push_back({lobe_id, inst.delta, inst.side == 1 ? t_loop : h_loop});
  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

Diagram apply_r1_minus(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  const Crossing& c = ix.crossing(inst.crossing);
  // Find the monogon lobe at this crossing; `face` disambiguates when a
  // standalone eight carries two.
  int lobe_face = -1, lobe_quadrant = -1;
  for (int k = 0; k < 4; ++k) {
    int f = ix.quadrant_face(c.id, k);
    const Face& face = ix.face(f);
    if (face.cycles.size() == 1 && face.cycles[0].size() == 1 &&
        ix.crossing_of(face.cycles[0][0]) == c.id && (inst.face < 0 || inst.face == f)) {
      lobe_face = f;
      lobe_quadrant = k;
      break;
    }
  }
  if (lobe_face < 0) throw MoveError("site", "crossing carries no matching kink lobe");
  if (ix.quadrant_sign(c.id, lobe_quadrant) != -1)
    throw MoveError("condition 5", "R1- removes a negative kink; this lobe is positive");
  check_epsilon_conditions(d, ix, inst.epsilons, {lobe_face});

  int loop_arc = ix.arc_of(ix.face(lobe_face).cycles[0][0]);
  int h_in = -1, t_out = -1;
  for (int s = 0; s < 4; ++s) {
    int dart = c.darts[s];
    if (ix.arc_of(dart) == loop_arc) continue;
    (ix.is_tail(dart) ? t_out : h_in) = dart;
  }
  int in_arc = ix.arc_of(h_in), out_arc = ix.arc_of(t_out);

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  std::erase_if(spec.skeleton.crossings, [&](const Crossing& x) { return x.id == c.id; });
  spec.killed.insert(lobe_face);

  if (in_arc != out_arc) {
    int out_head = ix.arc(out_arc).head;
    std::erase_if(spec.skeleton.arcs,
                  [&](const Arc& x) { return x.id == loop_arc || x.id == out_arc; });
    for (Arc& arc : spec.skeleton.arcs)
      if (arc.id == in_arc) arc.head = out_head;
  } else {
    // The component was a standalone figure eight; it becomes a circle.
    int other_lobe = ix.quadrant_face(c.id, lobe_quadrant + 2);
    int ambient = ix.quadrant_face(c.id, lobe_quadrant + 1);
    std::erase_if(spec.skeleton.arcs, [&](const Arc& x) {
      return x.id == loop_arc || x.id == in_arc;
    });
    WindingAssignment w = winding_numbers(d);
    Circle circ;
    circ.id = fresh_circle_id(d);
    circ.component = ix.arc(in_arc).component;
    circ.inside_face = other_lobe;
    circ.outside_face = ambient;
    circ.positive = w.at(other_lobe) == w.at(ambient) + 1;
    spec.skeleton.circles.push_back(circ);
  }
  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

// ---- R2 ----------------------------------------------------------------

int side_of(const Index& ix, const Arc& a, int face) {
  if (ix.left_face(a) == face) return +1;
  if (ix.right_face(a) == face) return -1;
  return 0;
}

Diagram apply_r2_insert(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  if (inst.arc == inst.arc2) throw MoveError("site", "R2 needs two distinct arcs");
  if (inst.over != 1 && inst.over != -1) throw MoveError("site", "R2 needs over = +1 or -1");
  if (inst.delta <= 0 || inst.split_first <= 0 || inst.split_second <= 0)
    throw MoveError("site", "R2 insert needs positive bigon and split areas");
  const Arc& u = ix.arc(inst.arc);
  const Arc& v = ix.arc(inst.arc2);
  if (inst.face == d.outer_face)
    throw MoveError("site", "R2 through the outer face is not supported");
  int su = side_of(ix, u, inst.face), sv = side_of(ix, v, inst.face);
  if (su == 0 || sv == 0) throw MoveError("site", "both arcs must bound the common face");
  check_epsilon_conditions(d, ix, inst.epsilons, {inst.face});

  int Q1 = fresh_crossing_id(d), Q2 = Q1 + 1;
  int d0 = fresh_dart_id(d);
  std::array<int, 4> d1 = {d0, d0 + 1, d0 + 2, d0 + 3};      // Q1 slots E,N,W,S
  std::array<int, 4> d2 = {d0 + 4, d0 + 5, d0 + 6, d0 + 7};  // Q2 slots E,N,W,S
  int tip_id = fresh_arc_id(d), u2_id = tip_id + 1, mid_id = tip_id + 2, v2_id = tip_id + 3;
  int base_face = fresh_face_id(d);
  int bigon_id = base_face, first_id = base_face + 1, second_id = base_face + 2;

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  for (int q : {Q1, Q2}) {
    Crossing c;
    c.id = q;
    c.darts = q == Q1 ? d1 : d2;
    c.sign0 = inst.over;
    spec.skeleton.crossings.push_back(c);
  }
  // Finger strand u: tail piece keeps the id, tip crosses the bigon.
  if (su == 1) {
    for (Arc& arc : spec.skeleton.arcs)
      if (arc.id == u.id) arc.head = d1[3];
    spec.skeleton.arcs.push_back({tip_id, d1[1], d2[1], u.component});
    spec.skeleton.arcs.push_back({u2_id, d2[3], u.head, u.component});
  } else {
    for (Arc& arc : spec.skeleton.arcs)
      if (arc.id == u.id) arc.head = d2[3];
    spec.skeleton.arcs.push_back({tip_id, d2[1], d1[1], u.component});
    spec.skeleton.arcs.push_back({u2_id, d1[3], u.head, u.component});
  }
  if (sv == 1) {
    for (Arc& arc : spec.skeleton.arcs)
      if (arc.id == v.id) arc.head = d2[0];
    spec.skeleton.arcs.push_back({mid_id, d2[2], d1[0], v.component});
    spec.skeleton.arcs.push_back({v2_id, d1[2], v.head, v.component});
  } else {
    for (Arc& arc : spec.skeleton.arcs)
      if (arc.id == v.id) arc.head = d1[2];
    spec.skeleton.arcs.push_back({mid_id, d1[0], d2[2], v.component});
    spec.skeleton.arcs.push_back({v2_id, d2[0], v.head, v.component});
  }

  spec.killed.insert(inst.face);
  spec.created.push_back({bigon_id, inst.delta, d1[0]});
  spec.created.push_back({first_id, inst.split_first, d1[2]});
  spec.created.push_back({second_id, inst.split_second, d2[3]});

  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

Diagram apply_r2_remove(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  const Face& g = ix.face(inst.face);
  if (!g.area || g.cycles.size() != 1 || g.cycles[0].size() != 2)
    throw MoveError("site", "face is not a bigon");
  int da = g.cycles[0][0], db = g.cycles[0][1];
  int qa = ix.crossing_of(da), qb = ix.crossing_of(db);
  if (qa == qb) throw MoveError("site", "bigon touches one crossing twice");
  if (ix.quadrant_sign(qa, ix.slot_of(da)) == ix.quadrant_sign(qb, ix.slot_of(db)))
    throw MoveError("condition 5", "R2 removal needs a mixed-sign bigon");

  // Faces at the quadrants opposite the bigon merge with it.
  int oppa = ix.quadrant_face(qa, ix.slot_of(da) + 2);
  int oppb = ix.quadrant_face(qb, ix.slot_of(db) + 2);
  check_epsilon_conditions(d, ix, inst.epsilons, {inst.face, oppa, oppb});

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  std::erase_if(spec.skeleton.crossings,
                [&](const Crossing& x) { return x.id == qa || x.id == qb; });

  // Smooth both crossings: merge the arc chains passing straight through.
  std::map<int, int> next_tail;  // head dart -> continuing tail dart
  for (int q : {qa, qb})
    for (int s = 0; s < 4; ++s) {
      int dart = ix.dart_at(q, s);
      if (!ix.is_tail(dart)) next_tail[dart] = ix.dart_at(q, s + 2);
    }
  std::set<int> dead_arcs;
  std::vector<Arc> merged;
  std::vector<std::pair<int, int>> new_circles;  // (sample old arc, representative)
  for (const Arc& a : d.arcs) {
    int qh = ix.crossing_of(a.head);
    int qt = ix.crossing_of(a.tail);
    bool touches = qh == qa || qh == qb || qt == qa || qt == qb;
    if (!touches || dead_arcs.count(a.id)) continue;
    if (qt == qa || qt == qb) continue;  // start chains outside the removed crossings
    Arc chain = a;
    dead_arcs.insert(a.id);
    int guard = 0;
    while (ix.crossing_of(chain.head) == qa || ix.crossing_of(chain.head) == qb) {
      int cont = next_tail.at(chain.head);
      const Arc& nxt = ix.arc(ix.arc_of(cont));
      dead_arcs.insert(nxt.id);
      chain.head = nxt.head;
      if (++guard > static_cast<int>(d.arcs.size())) throw MoveError("site", "broken strand");
    }
    merged.push_back(chain);
  }
  // Chains that never reach a surviving crossing close into circles.
  WindingAssignment w = winding_numbers(d);
  int circle_id = fresh_circle_id(d);
  for (const Arc& a : d.arcs) {
    if (dead_arcs.count(a.id)) continue;
    int qh = ix.crossing_of(a.head), qt = ix.crossing_of(a.tail);
    bool in_site = (qh == qa || qh == qb) && (qt == qa || qt == qb);
    if (!in_site) continue;
    // walk the closed chain
    std::vector<int> chain_arcs;
    int cur = a.id;
    do {
      chain_arcs.push_back(cur);
      dead_arcs.insert(cur);
      cur = ix.arc_of(next_tail.at(ix.arc(cur).head));
    } while (cur != a.id);
    int old_left = ix.left_face(ix.arc(a.id));
    int old_right = ix.right_face(ix.arc(a.id));
    Circle circ;
    circ.id = circle_id++;
    circ.component = a.component;
    // The unbounded side, or failing that the side with winding nearer zero,
    // faces outward.
    bool left_out = resolve(spec.redirect, old_left) == d.outer_face ||
                    (resolve(spec.redirect, old_right) != d.outer_face &&
                     std::abs(w.at(old_left)) < std::abs(w.at(old_right)));
    circ.inside_face = left_out ? old_right : old_left;
    circ.outside_face = left_out ? old_left : old_right;
    circ.positive = w.at(circ.inside_face) == w.at(circ.outside_face) + 1;
    spec.skeleton.circles.push_back(circ);
  }
  std::erase_if(spec.skeleton.arcs, [&](const Arc& x) {
    return dead_arcs.count(x.id) || ix.crossing_of(x.head) == qa || ix.crossing_of(x.head) == qb ||
           ix.crossing_of(x.tail) == qa || ix.crossing_of(x.tail) == qb;
  });
  for (const Arc& a : merged) spec.skeleton.arcs.push_back(a);

  // Merge G and the two opposite faces.
  int target = -1;
  if (oppa == d.outer_face || oppb == d.outer_face)
    target = d.outer_face;
  else
    target = std::min(oppa, oppb);
  spec.redirect[inst.face] = target;
  if (oppa != target) spec.redirect[oppa] = target;
  if (oppb != target && oppb != oppa) spec.redirect[oppb] = target;

  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

// ---- R3 ----------------------------------------------------------------

Diagram apply_r3(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  const Face& t = ix.face(inst.face);
  if (!t.area || t.cycles.size() != 1 || t.cycles[0].size() != 3)
    throw MoveError("site", "face is not a triangle");
  std::vector<int> tri = t.cycles[0];
  std::set<int> tri_crossings;
  for (int dart : tri) tri_crossings.insert(ix.crossing_of(dart));
  if (tri_crossings.size() != 3) throw MoveError("site", "triangle revisits a crossing");

  // Signs mixed, and the three pairwise over/under relations acyclic.
  {
    std::set<int> signs;
    for (int dart : tri) signs.insert(ix.quadrant_sign(ix.crossing_of(dart), ix.slot_of(dart)));
    if (signs.size() != 2)
      throw MoveError("condition 5", "R3 needs mixed corner signs on the triangle");
  }
  // Strand of a triangle arc = the arc itself; at each corner two of them
  // cross. over(x) beats under(y): cycle check over the three arcs.
  std::map<int, std::map<int, bool>> beats;  // arc -> arc -> true if over
  for (int dart : tri) {
    int q = ix.crossing_of(dart);
    int k = ix.slot_of(dart);
    int arc_out = ix.arc_of(ix.dart_at(q, k));      // strand of parity k
    int arc_in = ix.arc_of(ix.dart_at(q, k + 1));   // the other strand
    const Crossing& c = ix.crossing(q);
    bool even_over = c.sign0 == -1;
    bool out_over = (k % 2 == 0) == even_over;
    beats[arc_out][arc_in] = out_over;
    beats[arc_in][arc_out] = !out_over;
  }
  {
    std::vector<int> arcs;
    for (int dart : tri) arcs.push_back(ix.arc_of(dart));
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    if (arcs.size() != 3) throw MoveError("site", "triangle arcs are not three distinct arcs");
    bool cyclic = (beats[arcs[0]][arcs[1]] == beats[arcs[1]][arcs[2]]) &&
                  (beats[arcs[1]][arcs[2]] == beats[arcs[2]][arcs[0]]);
    if (cyclic)
      throw MoveError("condition 5", "R3 needs a consistent height order at the triple point");
  }
  check_epsilon_conditions(d, ix, inst.epsilons);

  // Per strand, swap the attachment of the outside arcs between its two
  // triangle crossings.
  struct EndUpdate {
    int arc;
    bool head;
    int new_dart;
  };
  std::vector<EndUpdate> updates;
  std::set<std::pair<int, bool>> touched;
  for (int dart : tri) {
    const Arc& m = ix.arc(ix.arc_of(dart));
    int qx = ix.crossing_of(m.tail), qy = ix.crossing_of(m.head);
    int dx = ix.dart_at(qx, ix.slot_of(m.tail) + 2);  // head-role opposite the tail
    int dy = ix.dart_at(qy, ix.slot_of(m.head) + 2);  // tail-role opposite the head
    int in_arc = ix.arc_of(dx), out_arc = ix.arc_of(dy);
    updates.push_back({in_arc, true, m.head});
    updates.push_back({m.id, true, dx});
    updates.push_back({m.id, false, dy});
    updates.push_back({out_arc, false, m.tail});
  }
  for (const EndUpdate& u : updates)
    if (!touched.insert({u.arc, u.head}).second)
      throw MoveError("site", "degenerate R3 site: an arc end is rewired twice");

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  for (Arc& a : spec.skeleton.arcs)
    for (const EndUpdate& u : updates)
      if (a.id == u.arc) (u.head ? a.head : a.tail) = u.new_dart;

  // The flipped triangle re-forms on the opposite quadrants; its old darts
  // may not vote.
  spec.novote.insert(inst.face);
  int q0 = ix.crossing_of(tri[0]);
  spec.pins[ix.dart_at(q0, ix.slot_of(tri[0]) + 2)] = inst.face;
  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

// ---- H moves (saddles) --------------------------------------------------

Diagram apply_saddle(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  if (inst.arc == inst.arc2) throw MoveError("site", "saddle needs two distinct arcs");
  if (inst.face == d.outer_face)
    throw MoveError("site", "saddle through the outer face is not supported");
  if (inst.split_first <= 0 || inst.split_second <= 0)
    throw MoveError("site", "saddle needs positive split areas");
  const Arc& u = ix.arc(inst.arc);
  const Arc& v = ix.arc(inst.arc2);
  int su = side_of(ix, u, inst.face), sv = side_of(ix, v, inst.face);
  if (su == 0 || sv == 0) throw MoveError("site", "both arcs must bound the common face");
  if (su != sv)
    throw MoveError("condition 5", "saddle needs anti-parallel strands along the face");
  bool fuse = u.component != v.component;
  if (inst.kind == MoveKind::H1 && !fuse)
    throw MoveError("site", "H1 fuses two components; arcs lie on one component");
  if (inst.kind == MoveKind::H2 && fuse)
    throw MoveError("site", "H2 acts on one component; arcs lie on two");

  int pu = su == 1 ? ix.right_face(u) : ix.left_face(u);
  int pv = sv == 1 ? ix.right_face(v) : ix.left_face(v);
  std::set<int> dying{inst.face};
  if (pu != pv) dying.insert(pv == d.outer_face ? pu : pv);
  check_epsilon_conditions(d, ix, inst.epsilons, dying);

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  for (Arc& a : spec.skeleton.arcs) {
    if (a.id == u.id) a.head = v.head;
    if (a.id == v.id) a.head = u.head;
  }
  spec.killed.insert(inst.face);
  int first_id = fresh_face_id(d), second_id = first_id + 1;
  spec.created.push_back({first_id, inst.split_first, su == 1 ? u.tail : u.head});
  spec.created.push_back({second_id, inst.split_second, sv == 1 ? v.tail : v.head});
  if (pu != pv) {
    if (pv == d.outer_face)
      spec.redirect[pu] = pv;
    else
      spec.redirect[pv] = pu;
  }

  // Components: retrace the strands involved.
  std::map<int, int> comp_of;  // arc id -> component
  for (const Arc& a : spec.skeleton.arcs) comp_of[a.id] = a.component;
  std::map<int, std::pair<int, int>> where;
  for (const Crossing& c : spec.skeleton.crossings)
    for (int s = 0; s < 4; ++s) where[c.darts[s]] = {c.id, s};
  std::map<int, int> arc_of_tail;
  for (const Arc& a : spec.skeleton.arcs) arc_of_tail[a.tail] = a.id;
  auto next_arc = [&](int arc_id) {
    const Arc* a = nullptr;
    for (const Arc& x : spec.skeleton.arcs)
      if (x.id == arc_id) a = &x;
    auto [cid, slot] = where.at(a->head);
    for (const Crossing& c : spec.skeleton.crossings)
      if (c.id == cid) return arc_of_tail.at(c.darts[mod4(slot + 2)]);
    throw MoveError("site", "broken strand");
  };
  std::set<int> seen;
  int cursor = u.id;
  do {
    comp_of[cursor] = u.component;
    seen.insert(cursor);
    cursor = next_arc(cursor);
  } while (cursor != u.id);
  int second_comp = fuse ? u.component : -1;
  if (!seen.count(v.id)) {
    second_comp = fuse ? std::min(u.component, v.component) : fresh_component_id(d);
    cursor = v.id;
    do {
      comp_of[cursor] = second_comp;
      seen.insert(cursor);
      cursor = next_arc(cursor);
    } while (cursor != v.id);
  }
  for (Arc& a : spec.skeleton.arcs) a.component = comp_of[a.id];
  std::set<int> comps;
  for (const Arc& a : spec.skeleton.arcs) comps.insert(a.component);
  for (const Circle& c : spec.skeleton.circles) comps.insert(c.component);
  spec.skeleton.components.assign(comps.begin(), comps.end());

  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

// ---- Birth / Death ------------------------------------------------------

Diagram apply_birth(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  if (inst.delta <= 0) throw MoveError("site", "birth lobes need positive area");
  if (!ix.has_face(inst.face)) throw MoveError("site", "unknown host face");
  check_epsilon_conditions(d, ix, inst.epsilons);

  int Q = fresh_crossing_id(d);
  int d0 = fresh_dart_id(d);
  int e_id = fresh_arc_id(d), w_id = e_id + 1;
  int comp = fresh_component_id(d);
  int lobe_e = fresh_face_id(d), lobe_w = lobe_e + 1;

  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  Crossing c;
  c.id = Q;
  c.darts = {d0, d0 + 1, d0 + 2, d0 + 3};
  c.sign0 = -1;  // lobes sit on the odd quadrants with sign +1: a newborn 8+
  spec.skeleton.crossings.push_back(c);
  spec.skeleton.arcs.push_back({e_id, d0 + 3, d0, comp});
  spec.skeleton.arcs.push_back({w_id, d0 + 2, d0 + 1, comp});
  spec.skeleton.components.push_back(comp);

  spec.created.push_back({lobe_e, inst.delta, d0 + 3});
  spec.created.push_back({lobe_w, inst.delta, d0 + 1});
  spec.pins[d0] = inst.face;

  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

Diagram apply_death(const Diagram& d, const Index& ix, const MoveInstance& inst) {
  const Crossing& c = ix.crossing(inst.crossing);
  int a0 = ix.arc_of(c.darts[0]);
  int a1 = ix.arc_of(c.darts[1]);
  std::set<int> arcs{a0, a1, ix.arc_of(c.darts[2]), ix.arc_of(c.darts[3])};
  if (arcs.size() != 2) throw MoveError("site", "crossing is not a standalone figure eight");
  for (int aid : arcs) {
    const Arc& a = ix.arc(aid);
    if (ix.crossing_of(a.tail) != c.id || ix.crossing_of(a.head) != c.id)
      throw MoveError("site", "crossing is not a standalone figure eight");
  }
  // Lobes: the two monogon quadrant faces; both must carry sign -1 and equal
  // areas (the component is an exact 8-).
  std::vector<int> lobe_faces;
  int lobe_sign = 0;
  for (int k = 0; k < 4; ++k) {
    int f = ix.quadrant_face(c.id, k);
    const Face& face = ix.face(f);
    if (face.cycles.size() == 1 && face.cycles[0].size() == 1) {
      lobe_faces.push_back(f);
      lobe_sign = ix.quadrant_sign(c.id, k);
    }
  }
  std::sort(lobe_faces.begin(), lobe_faces.end());
  lobe_faces.erase(std::unique(lobe_faces.begin(), lobe_faces.end()), lobe_faces.end());
  if (lobe_faces.size() != 2) throw MoveError("site", "figure-eight lobes not found");
  if (lobe_sign != -1)
    throw MoveError("condition 5", "death applies to an 8- component (negative lobes)");
  if (*ix.face(lobe_faces[0]).area != *ix.face(lobe_faces[1]).area)
    throw MoveError("condition 5", "death needs an exact figure eight (equal lobes)");
  check_epsilon_conditions(d, ix, inst.epsilons, {lobe_faces[0], lobe_faces[1]});

  int comp = ix.arc(a0).component;
  RewriteSpec spec;
  spec.skeleton = d;
  spec.skeleton.layout.reset();
  spec.skeleton.faces.clear();
  std::erase_if(spec.skeleton.crossings, [&](const Crossing& x) { return x.id == c.id; });
  std::erase_if(spec.skeleton.arcs, [&](const Arc& x) { return arcs.count(x.id) != 0; });
  std::erase_if(spec.skeleton.components, [&](int x) { return x == comp; });
  spec.killed.insert(lobe_faces[0]);
  spec.killed.insert(lobe_faces[1]);

  Diagram out = finish_rewrite(d, ix, std::move(spec), inst.epsilons);
  check_conservation(d, out);
  return out;
}

}  // namespace

const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::R0: return "R0";
    case MoveKind::R1Plus: return "R1+";
    case MoveKind::R1Minus: return "R1-";
    case MoveKind::R2Insert: return "R2-insert";
    case MoveKind::R2Remove: return "R2-remove";
    case MoveKind::R3: return "R3";
    case MoveKind::H1: return "H1";
    case MoveKind::H2: return "H2";
    case MoveKind::Birth: return "birth";
    case MoveKind::Death: return "death";
  }
  return "?";
}

std::optional<MoveKind> move_from_name(const std::string& name) {
  for (MoveKind k : {MoveKind::R0, MoveKind::R1Plus, MoveKind::R1Minus, MoveKind::R2Insert,
                     MoveKind::R2Remove, MoveKind::R3, MoveKind::H1, MoveKind::H2,
                     MoveKind::Birth, MoveKind::Death})
    if (name == move_name(k)) return k;
  return std::nullopt;
}

bool move_is_figure_transcription(MoveKind k) { return k != MoveKind::R0; }

Diagram apply_move(const Diagram& d, const MoveInstance& inst) {
  ensure_valid(d);
  Index ix(d);
  switch (inst.kind) {
    case MoveKind::R0: return apply_r0(d, ix, inst);
    case MoveKind::R1Plus: return apply_r1_plus(d, ix, inst);
    case MoveKind::R1Minus: return apply_r1_minus(d, ix, inst);
    case MoveKind::R2Insert: return apply_r2_insert(d, ix, inst);
    case MoveKind::R2Remove: return apply_r2_remove(d, ix, inst);
    case MoveKind::R3: return apply_r3(d, ix, inst);
    case MoveKind::H1:
    case MoveKind::H2: return apply_saddle(d, ix, inst);
    case MoveKind::Birth: return apply_birth(d, ix, inst);
    case MoveKind::Death: return apply_death(d, ix, inst);
  }
  throw MoveError("site", "unknown move kind");
}

std::vector<MoveInstance> applicable_moves(const Diagram& d) {
  ensure_valid(d);
  Index ix(d);
  std::vector<MoveInstance> out;

  MoveInstance r0;
  r0.kind = MoveKind::R0;
  out.push_back(r0);

  for (const Arc& a : d.arcs)
    for (int side : {+1, -1}) {
      MoveInstance m;
      m.kind = MoveKind::R1Plus;
      m.arc = a.id;
      m.side = side;
      m.face = side == 1 ? ix.left_face(a) : ix.right_face(a);
      out.push_back(m);
    }

  for (const Crossing& c : d.crossings) {
    for (int k = 0; k < 4; ++k) {
      int f = ix.quadrant_face(c.id, k);
      const Face& face = ix.face(f);
      if (face.cycles.size() == 1 && face.cycles[0].size() == 1 &&
          ix.crossing_of(face.cycles[0][0]) == c.id && ix.slot_of(face.cycles[0][0]) == k &&
          ix.quadrant_sign(c.id, k) == -1) {
        MoveInstance m;
        m.kind = MoveKind::R1Minus;
        m.crossing = c.id;
        m.face = f;
        out.push_back(m);
      }
    }
  }

  // Arc pairs on a common bounded face: R2 insertions and saddles.
  for (std::size_t i = 0; i < d.arcs.size(); ++i)
    for (std::size_t j = 0; j < d.arcs.size(); ++j) {
      if (i == j) continue;
      const Arc& u = d.arcs[i];
      const Arc& v = d.arcs[j];
      for (int f : {ix.left_face(u), ix.right_face(u)}) {
        if (f == d.outer_face) continue;
        int sv = side_of(ix, v, f);
        if (sv == 0) continue;
        if (i < j)
          for (int over : {+1, -1}) {
            MoveInstance m;
            m.kind = MoveKind::R2Insert;
            m.arc = u.id;
            m.arc2 = v.id;
            m.face = f;
            m.over = over;
            out.push_back(m);
          }
        int su = side_of(ix, u, f);
        if (i < j && su == sv) {
          MoveInstance m;
          m.kind = u.component != v.component ? MoveKind::H1 : MoveKind::H2;
          m.arc = u.id;
          m.arc2 = v.id;
          m.face = f;
          out.push_back(m);
        }
      }
    }

  for (const Face& f : d.faces) {
    if (!f.area || f.cycles.size() != 1) continue;
    if (f.cycles[0].size() == 2) {
      int da = f.cycles[0][0], db = f.cycles[0][1];
      int qa = ix.crossing_of(da), qb = ix.crossing_of(db);
      if (qa != qb &&
          ix.quadrant_sign(qa, ix.slot_of(da)) != ix.quadrant_sign(qb, ix.slot_of(db))) {
        MoveInstance m;
        m.kind = MoveKind::R2Remove;
        m.face = f.id;
        out.push_back(m);
      }
    }
    if (f.cycles[0].size() == 3) {
      std::set<int> qs, signs;
      for (int dart : f.cycles[0]) {
        qs.insert(ix.crossing_of(dart));
        signs.insert(ix.quadrant_sign(ix.crossing_of(dart), ix.slot_of(dart)));
      }
      if (qs.size() == 3 && signs.size() == 2) {
        MoveInstance m;
        m.kind = MoveKind::R3;
        m.face = f.id;
        out.push_back(m);
      }
    }
  }

  for (const Face& f : d.faces) {
    MoveInstance m;
    m.kind = MoveKind::Birth;
    m.face = f.id;
    out.push_back(m);
  }

  for (const Crossing& c : d.crossings) {
    std::set<int> arcs;
    for (int s = 0; s < 4; ++s) arcs.insert(ix.arc_of(c.darts[s]));
    if (arcs.size() != 2) continue;
    bool standalone = true;
    for (int aid : arcs) {
      const Arc& a = ix.arc(aid);
      if (ix.crossing_of(a.tail) != c.id || ix.crossing_of(a.head) != c.id) standalone = false;
    }
    if (!standalone) continue;
    std::vector<int> lobes;
    int sign = 0;
    for (int k = 0; k < 4; ++k) {
      int f = ix.quadrant_face(c.id, k);
      if (ix.face(f).cycles.size() == 1 && ix.face(f).cycles[0].size() == 1) {
        if (std::find(lobes.begin(), lobes.end(), f) == lobes.end()) lobes.push_back(f);
        sign = ix.quadrant_sign(c.id, k);
      }
    }
    if (lobes.size() == 2 && sign == -1 &&
        *ix.face(lobes[0]).area == *ix.face(lobes[1]).area) {
      MoveInstance m;
      m.kind = MoveKind::Death;
      m.crossing = c.id;
      out.push_back(m);
    }
  }

  std::sort(out.begin(), out.end(), [](const MoveInstance& a, const MoveInstance& b) {
    auto key = [](const MoveInstance& m) {
      return std::tuple(static_cast<int>(m.kind), m.arc, m.arc2, m.face, m.crossing, m.side,
                        m.over);
    };
    return key(a) < key(b);
  });
  return out;
}

Diagram replay(const Diagram& start, const std::vector<MoveInstance>& steps) {
  Diagram cur = start;
  for (const MoveInstance& step : steps) cur = apply_move(cur, step);
  return cur;
}

// ---- search -------------------------------------------------------------

namespace {

// Epsilon assignments that shift the signed total by exactly `need` while
// satisfying conditions 2-4: every surviving sign-pure face gets a minimal
// strict step, then one face absorbs the residual.
std::vector<std::map<int, Rational>> balance_candidates(const Diagram& d, const Index& ix,
                                                        const WindingAssignment& w,
                                                        const Rational& need,
                                                        const std::set<int>& dying) {
  std::vector<std::map<int, Rational>> out;
  std::vector<const Face*> bounded;
  Rational min_area;
  for (const Face& f : d.faces) {
    if (!f.area || dying.count(f.id)) continue;
    bounded.push_back(&f);
    if (min_area == 0 || *f.area < min_area) min_area = *f.area;
  }
  for (Rational unit : {Rational(min_area / 8), Rational(min_area / 2)}) {
    std::map<int, Rational> seed;
    Rational drift = -need;
    for (const Face* f : bounded) {
      SignPanel p = face_panel(d, ix, f->id);
      if (p.corners == 0 || (!p.all_pos && !p.all_neg)) continue;
      Rational e = p.all_pos ? unit : -unit;
      seed[f->id] = e;
      drift += Rational(w.at(f->id)) * e;
    }
    if (drift == 0) {
      out.push_back(seed);
      continue;
    }
    for (const Face* f : bounded) {
      int wf = w.at(f->id);
      if (wf == 0) continue;
      Rational e = -drift / wf;
      Rational total = seed.count(f->id) ? seed[f->id] + e : e;
      if (*f->area + total <= 0) continue;
      SignPanel p = face_panel(d, ix, f->id);
      if (p.corners > 0 && p.all_pos && total <= 0) continue;
      if (p.corners > 0 && p.all_neg && total >= 0) continue;
      auto candidate = seed;
      candidate[f->id] = total;
      out.push_back(candidate);
      if (out.size() >= 4) return out;
    }
  }
  return out;
}

// Try to complete a structural template with canonical area parameters so
// that the move balances. Returns every completion worth exploring; the
// search treats these as best-effort probes.
std::vector<MoveInstance> complete_template(const Diagram& d, const MoveInstance& tmpl) {
  std::vector<MoveInstance> out;
  Index ix(d);
  WindingAssignment w = winding_numbers(d);
  auto face_area = [&](int f) { return *ix.face(f).area; };

  auto emit = [&](const MoveInstance& m, const Rational& need, const std::set<int>& dying) {
    for (auto& eps : balance_candidates(d, ix, w, need, dying)) {
      MoveInstance mm = m;
      mm.epsilons = eps;
      out.push_back(mm);
    }
  };

  switch (tmpl.kind) {
    case MoveKind::R1Plus: {
      int host = tmpl.face;
      Rational cap = host == d.outer_face ? Rational(2) : face_area(host) / 2;
      int wl = (host == d.outer_face ? 0 : w.at(host)) + (tmpl.side == 1 ? 1 : -1);
      // two lobe sizes so a closing R0 can still grow the new positive lobe
      for (Rational delta : {Rational(cap / 2), Rational(cap / 4)}) {
        if (delta <= 0) continue;
        MoveInstance m = tmpl;
        m.delta = delta;
        emit(m, -Rational(wl) * delta, {});
      }
      break;
    }
    case MoveKind::R1Minus: {
      if (tmpl.face >= 0)
        emit(tmpl, Rational(w.at(tmpl.face)) * face_area(tmpl.face), {tmpl.face});
      break;
    }
    case MoveKind::Birth: {
      if (tmpl.face == d.outer_face) {
        for (Rational delta : {Rational(1), Rational(1, 4)}) {
          MoveInstance m = tmpl;
          m.delta = delta;
          emit(m, 0, {});
        }
      } else {
        // the newborn lobes land at windings w(F) +- 1
        for (Rational delta : {Rational(face_area(tmpl.face) / 4),
                               Rational(face_area(tmpl.face) / 8)}) {
          MoveInstance m = tmpl;
          m.delta = delta;
          emit(m, -Rational(2 * w.at(tmpl.face)) * delta, {});
        }
      }
      break;
    }
    case MoveKind::Death: {
      const Crossing& c = ix.crossing(tmpl.crossing);
      int host = -1;
      Rational lobe_area;
      for (int k = 0; k < 4; ++k) {
        int f = ix.quadrant_face(c.id, k);
        const Face& face = ix.face(f);
        if (face.cycles.size() == 1 && face.cycles[0].size() == 1)
          lobe_area = *face.area;
        else
          host = f;
      }
      int wh = host == d.outer_face ? 0 : w.at(host);
      std::set<int> dying;
      for (int k = 0; k < 4; ++k) {
        int f = ix.quadrant_face(c.id, k);
        if (ix.face(f).cycles.size() == 1 && ix.face(f).cycles[0].size() == 1) dying.insert(f);
      }
      emit(tmpl, Rational(2 * wh) * lobe_area, dying);
      break;
    }
    case MoveKind::R2Remove: {
      const Face& g = ix.face(tmpl.face);
      int da = g.cycles[0][0], db = g.cycles[0][1];
      int oppa = ix.quadrant_face(ix.crossing_of(da), ix.slot_of(da) + 2);
      int oppb = ix.quadrant_face(ix.crossing_of(db), ix.slot_of(db) + 2);
      std::set<int> dying{g.id, oppa, oppb};
      // the merged face's winding is not knowable here; probe a few shifts
      Rational base = Rational(w.at(g.id)) * *g.area;
      for (Rational need : {Rational(0), Rational(-base), base}) emit(tmpl, need, dying);
      break;
    }
    case MoveKind::R2Insert: {
      MoveInstance m = tmpl;
      Rational base = face_area(tmpl.face);
      m.delta = base / 8;
      m.split_first = (base - m.delta) / 2;
      m.split_second = (base - m.delta) / 2;
      int wf = w.at(tmpl.face);
      // the bigon lands one winding step off the far side of the strand
      for (int wg : {wf + 1, wf - 1})
        emit(m,
             -Rational(wg) * m.delta -
                 Rational(wf) * (m.split_first + m.split_second - base),
             {tmpl.face});
      break;
    }
    case MoveKind::H1:
    case MoveKind::H2: {
      MoveInstance m = tmpl;
      Rational base = face_area(tmpl.face);
      m.split_first = base / 2;
      m.split_second = base / 2;
      emit(m, 0, {tmpl.face});
      break;
    }
    default:
      break;
  }
  return out;
}

// Exact R0 solve toward the goal given matching combinatorial shapes.
std::optional<MoveInstance> solve_r0(const Diagram& cur, const Diagram& goal) {
  CanonicalResult cs = canonical_shape(cur);
  CanonicalResult gs = canonical_shape(goal);
  if (cs.form != gs.form) return std::nullopt;
  Index cix(cur), gix(goal);
  for (const auto& corder : cs.face_orders)
    for (const auto& gorder : gs.face_orders) {
      MoveInstance m;
      m.kind = MoveKind::R0;
      bool ok = true;
      for (std::size_t i = 0; i < corder.size() && ok; ++i) {
        const Face& cf = cix.face(corder[i]);
        const Face& gf = gix.face(gorder[i]);
        if (cf.area.has_value() != gf.area.has_value()) ok = false;
        else if (cf.area && *cf.area != *gf.area)
          m.epsilons[cf.id] = *gf.area - *cf.area;
      }
      if (!ok) continue;
      try {
        Diagram moved = apply_move(cur, m);
        if (canonical_form(moved) == canonical_form(goal)) return m;
      } catch (const MoveError&) {
      }
    }
  return std::nullopt;
}

}  // namespace

SearchResult search_undercut(const Diagram& from, const Diagram& to, int max_depth, long budget) {
  ensure_valid(from);
  ensure_valid(to);
  SearchResult result;
  CanonicalForm goal = canonical_form(to);
  if (canonical_form(from) == goal) {
    result.outcome = SearchOutcome::Found;
    result.trace = MoveTrace{canonical_form(from), goal, {}};
    return result;
  }
  if (max_depth <= 0) {
    result.outcome = SearchOutcome::NotFound;
    return result;
  }

  struct Node {
    Diagram diagram;
    std::vector<MoveInstance> steps;
  };
  std::deque<Node> queue;
  std::set<std::string> visited;
  queue.push_back({from, {}});
  visited.insert(canonical_form(from).bytes);

  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    int depth = static_cast<int>(node.steps.size());
    if (depth >= max_depth) continue;

    // Direct R0 finish whenever the combinatorial type matches.
    if (auto r0 = solve_r0(node.diagram, to)) {
      result.outcome = SearchOutcome::Found;
      MoveTrace t;
      t.start = canonical_form(from);
      t.end = goal;
      t.steps = node.steps;
      t.steps.push_back(*r0);
      result.trace = t;
      return result;
    }

    for (const MoveInstance& tmpl : applicable_moves(node.diagram)) {
      if (tmpl.kind == MoveKind::R0) continue;  // handled by the exact solve
      for (const MoveInstance& inst : complete_template(node.diagram, tmpl)) {
        if (++result.expansions > budget) {
          result.outcome = SearchOutcome::BudgetExhausted;
          return result;
        }
        Diagram child;
        try {
          child = apply_move(node.diagram, inst);
        } catch (const MoveError&) {
          continue;
        }
        std::string key = canonical_form(child).bytes;
        if (!visited.insert(key).second) continue;
        std::vector<MoveInstance> steps = node.steps;
        steps.push_back(inst);
        if (key == goal.bytes) {
          result.outcome = SearchOutcome::Found;
          MoveTrace t;
          t.start = canonical_form(from);
          t.end = goal;
          t.steps = steps;
          result.trace = t;
          return result;
        }
        queue.push_back({std::move(child), std::move(steps)});
      }
    }
  }
  result.outcome = SearchOutcome::NotFound;
  return result;
}

// ---- serialization ------------------------------------------------------

namespace {
using ordered = nlohmann::ordered_json;
}

std::string trace_to_json(const MoveTrace& t, bool pretty) {
  ordered o;
  o["format"] = "ekd-trace-v1";
  o["start"] = t.start.bytes;
  o["end"] = t.end.bytes;
  o["depth"] = t.depth();
  o["steps"] = ordered::array();
  for (const MoveInstance& m : t.steps) {
    ordered s;
    s["kind"] = move_name(m.kind);
    if (m.arc >= 0) s["arc"] = m.arc;
    if (m.arc2 >= 0) s["arc2"] = m.arc2;
    if (m.face >= 0) s["face"] = m.face;
    if (m.crossing >= 0) s["crossing"] = m.crossing;
    if (m.side != 0) s["side"] = m.side;
    if (m.over != 0) s["over"] = m.over;
    if (m.delta != 0) s["delta"] = to_string(m.delta);
    if (m.split_first != 0) s["split_first"] = to_string(m.split_first);
    if (m.split_second != 0) s["split_second"] = to_string(m.split_second);
    ordered eps = ordered::object();
    for (const auto& [face, e] : m.epsilons) eps[std::to_string(face)] = to_string(e);
    s["epsilons"] = eps;
    o["steps"].push_back(s);
  }
  return pretty ? o.dump(2) + "\n" : o.dump();
}

std::vector<MoveInstance> steps_from_json(const std::string& bytes) {
  nlohmann::json doc = nlohmann::json::parse(bytes);
  std::vector<MoveInstance> out;
  for (const auto& s : doc.at("steps")) {
    MoveInstance m;
    auto kind = move_from_name(s.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown move kind in trace");
    m.kind = *kind;
    if (s.contains("arc")) m.arc = s["arc"].get<int>();
    if (s.contains("arc2")) m.arc2 = s["arc2"].get<int>();
    if (s.contains("face")) m.face = s["face"].get<int>();
    if (s.contains("crossing")) m.crossing = s["crossing"].get<int>();
    if (s.contains("side")) m.side = s["side"].get<int>();
    if (s.contains("over")) m.over = s["over"].get<int>();
    auto rat = [](const nlohmann::json& v) {
      auto r = parse_rational(v.get<std::string>());
      if (!r) throw std::invalid_argument("bad rational in trace");
      return *r;
    };
    if (s.contains("delta")) m.delta = rat(s["delta"]);
    if (s.contains("split_first")) m.split_first = rat(s["split_first"]);
    if (s.contains("split_second")) m.split_second = rat(s["split_second"]);
    if (s.contains("epsilons"))
      for (auto it = s["epsilons"].begin(); it != s["epsilons"].end(); ++it)
        m.epsilons[std::stoi(it.key())] = rat(it.value());
    out.push_back(m);
  }
  return out;
}

}  // namespace ekd
