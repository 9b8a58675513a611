#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ekd/diagram.hpp"
#include "ekd/families.hpp"
#include "ekd/invariants.hpp"

namespace ekd::test {

// Random isomorphic copy: fresh ids everywhere, random cyclic slot rotations
// (sign0 adjusted), shuffled record orders and cycle start points.
inline Diagram relabeled(const Diagram& d, std::mt19937& rng) {
  auto shuffle_ids = [&](std::size_t n, int lo) {
    std::vector<int> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = lo + static_cast<int>(i);
    std::shuffle(ids.begin(), ids.end(), rng);
    return ids;
  };
  Diagram out;
  std::map<int, int> comp_map, cross_map, arc_map, face_map, circle_map, dart_map;
  {
    auto ids = shuffle_ids(d.components.size(), 100);
    for (std::size_t i = 0; i < d.components.size(); ++i) comp_map[d.components[i]] = ids[i];
  }
  {
    auto ids = shuffle_ids(d.crossings.size(), 500);
    for (std::size_t i = 0; i < d.crossings.size(); ++i) cross_map[d.crossings[i].id] = ids[i];
  }
  {
    auto ids = shuffle_ids(d.arcs.size(), 900);
    for (std::size_t i = 0; i < d.arcs.size(); ++i) arc_map[d.arcs[i].id] = ids[i];
  }
  {
    auto ids = shuffle_ids(d.faces.size(), 1300);
    for (std::size_t i = 0; i < d.faces.size(); ++i) face_map[d.faces[i].id] = ids[i];
  }
  {
    auto ids = shuffle_ids(d.circles.size(), 1700);
    for (std::size_t i = 0; i < d.circles.size(); ++i) circle_map[d.circles[i].id] = ids[i];
  }
  {
    std::vector<int> all;
    for (const Crossing& c : d.crossings)
      for (int dart : c.darts) all.push_back(dart);
    auto ids = shuffle_ids(all.size(), 2000);
    for (std::size_t i = 0; i < all.size(); ++i) dart_map[all[i]] = ids[i];
  }
  for (int c : d.components) out.components.push_back(comp_map[c]);
  std::shuffle(out.components.begin(), out.components.end(), rng);
  for (const Crossing& c : d.crossings) {
    Crossing nc;
    nc.id = cross_map[c.id];
    int rot = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int s = 0; s < 4; ++s) nc.darts[s] = dart_map[c.darts[(s + rot) % 4]];
    nc.sign0 = rot % 2 == 0 ? c.sign0 : -c.sign0;
    out.crossings.push_back(nc);
  }
  std::shuffle(out.crossings.begin(), out.crossings.end(), rng);
  for (const Arc& a : d.arcs)
    out.arcs.push_back({arc_map[a.id], dart_map[a.tail], dart_map[a.head], comp_map[a.component]});
  std::shuffle(out.arcs.begin(), out.arcs.end(), rng);
  for (const Circle& c : d.circles)
    out.circles.push_back(
        {circle_map[c.id], comp_map[c.component], face_map[c.inside_face], face_map[c.outside_face],
         c.positive});
  for (const Face& f : d.faces) {
    Face nf;
    nf.id = face_map[f.id];
    nf.area = f.area;
    for (const auto& cyc : f.cycles) {
      std::vector<int> mapped;
      for (int dart : cyc) mapped.push_back(dart_map[dart]);
      std::rotate(mapped.begin(),
                  mapped.begin() + std::uniform_int_distribution<std::size_t>(
                                       0, mapped.size() - 1)(rng),
                  mapped.end());
      nf.cycles.push_back(mapped);
    }
    std::shuffle(nf.cycles.begin(), nf.cycles.end(), rng);
    out.faces.push_back(nf);
  }
  std::shuffle(out.faces.begin(), out.faces.end(), rng);
  out.outer_face = face_map[d.outer_face];
  return out;
}

// Orientation reversal of every component: arcs flip, windings negate.
inline Diagram reversed(const Diagram& d) {
  Diagram out = d;
  for (Arc& a : out.arcs) std::swap(a.tail, a.head);
  for (Circle& c : out.circles) c.positive = !c.positive;
  // Face cycles are orientation-of-plane data and stay; layout arrows stale.
  if (out.layout)
    for (auto& [id, pts] : out.layout->arcs) std::reverse(pts.begin(), pts.end());
  return out;
}

// Random valid diagram drawn from the builder families.
inline Diagram random_diagram(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  auto area = [&] { return Rational(std::uniform_int_distribution<int>(1, 12)(rng), 2); };
  auto sign = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1; };
  switch (kind(rng)) {
    case 0:
      return build_unknot(area());
    case 1:
      return build_eight(sign(), area());
    case 2: {
      int lobes = std::uniform_int_distribution<int>(2, 5)(rng);
      std::vector<int> signs;
      std::vector<Rational> areas;
      for (int i = 0; i < lobes - 1; ++i) signs.push_back(sign());
      for (int i = 0; i < lobes; ++i) areas.push_back(area());
      return build_chain(signs, areas);
    }
    default:
      return build_trefoil(sign(), {area(), area(), area()}, area());
  }
}

// Winding recomputation over a random propagation order (a random spanning
// tree of the face adjacency graph).
inline WindingAssignment winding_oracle(const Diagram& d, std::mt19937& rng) {
  Index ix(d);
  struct Edge {
    int a, b, delta;
  };
  std::vector<Edge> edges;
  for (const Arc& a : d.arcs) edges.push_back({ix.left_face(a), ix.right_face(a), 1});
  for (const Circle& c : d.circles)
    edges.push_back({c.inside_face, c.outside_face, c.positive ? 1 : -1});
  std::shuffle(edges.begin(), edges.end(), rng);
  WindingAssignment w;
  w[d.outer_face] = 0;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Edge& e : edges) {
      bool ha = w.count(e.a), hb = w.count(e.b);
      if (ha && !hb) {
        w[e.b] = w[e.a] - e.delta;
        grew = true;
      } else if (hb && !ha) {
        w[e.a] = w[e.b] + e.delta;  // tree edge chosen in random order
        grew = true;
      }
    }
  }
  return w;
}

// Turning number of a component read off the layout polylines.
inline int rotation_oracle(const Diagram& d, int component) {
  if (!d.layout) throw std::runtime_error("rotation oracle needs layout");
  Index ix(d);
  for (const Circle& c : d.circles)
    if (c.component == component) return c.positive ? 1 : -1;
  // Chain the component's arcs in traversal order.
  const Arc* start = nullptr;
  for (const Arc& a : d.arcs)
    if (a.component == component) {
      start = &a;
      break;
    }
  if (!start) throw std::runtime_error("component not found");
  std::vector<std::pair<double, double>> pts;
  auto push = [&](double x, double y) { pts.push_back({x, y}); };
  const Arc* arc = start;
  do {
    auto cp = d.layout->crossings.at(ix.crossing_of(arc->tail));
    push(to_double(cp.first), to_double(cp.second));
    auto it = d.layout->arcs.find(arc->id);
    if (it != d.layout->arcs.end())
      for (const auto& p : it->second) push(to_double(p.first), to_double(p.second));
    int cont = ix.dart_at(ix.crossing_of(arc->head), ix.slot_of(arc->head) + 2);
    arc = &ix.arc(ix.arc_of(cont));
  } while (arc->id != start->id);

  double total = 0;
  std::size_t n = pts.size();
  auto angle = [&](std::size_t i) {
    auto [x0, y0] = pts[i % n];
    auto [x1, y1] = pts[(i + 1) % n];
    return std::atan2(y1 - y0, x1 - x0);
  };
  for (std::size_t i = 0; i < n; ++i) {
    double turn = angle(i + 1) - angle(i);
    while (turn > M_PI) turn -= 2 * M_PI;
    while (turn < -M_PI) turn += 2 * M_PI;
    total += turn;
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

}  // namespace ekd::test
