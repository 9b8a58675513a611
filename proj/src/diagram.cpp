#include "ekd/diagram.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ekd {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

}  // namespace

Index::Index(const Diagram& d) : d_(&d) {
  for (std::size_t i = 0; i < d.crossings.size(); ++i) {
    const Crossing& c = d.crossings[i];
    if (!crossing_index_.emplace(c.id, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate crossing id " + std::to_string(c.id));
    for (int s = 0; s < 4; ++s) {
      if (!where_.emplace(c.darts[s], std::make_pair(c.id, s)).second)
        throw std::invalid_argument("dart " + std::to_string(c.darts[s]) + " used twice");
    }
  }
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    const Arc& a = d.arcs[i];
    if (!arc_index_.emplace(a.id, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate arc id " + std::to_string(a.id));
    if (!where_.count(a.tail) || !where_.count(a.head))
      throw std::invalid_argument("arc " + std::to_string(a.id) + " references unknown dart");
    if (a.tail == a.head)
      throw std::invalid_argument("arc " + std::to_string(a.id) + " has tail == head");
    if (arc_of_.count(a.tail) || arc_of_.count(a.head))
      throw std::invalid_argument("dart belongs to two arcs (arc " + std::to_string(a.id) + ")");
    arc_of_[a.tail] = a.id;
    arc_of_[a.head] = a.id;
    is_tail_[a.tail] = true;
    is_tail_[a.head] = false;
  }
  for (const auto& [dart, loc] : where_)
    if (!arc_of_.count(dart))
      throw std::invalid_argument("dart " + std::to_string(dart) + " belongs to no arc");
  for (std::size_t i = 0; i < d.faces.size(); ++i) {
    const Face& f = d.faces[i];
    if (!face_index_.emplace(f.id, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate face id " + std::to_string(f.id));
    for (const auto& cyc : f.cycles)
      for (int dart : cyc) {
        if (!where_.count(dart))
          throw std::invalid_argument("face " + std::to_string(f.id) + " references unknown dart");
        if (!face_of_dart_.emplace(dart, f.id).second)
          throw std::invalid_argument("dart " + std::to_string(dart) + " in two face cycles");
      }
  }
  for (const auto& [dart, loc] : where_)
    if (!face_of_dart_.count(dart))
      throw std::invalid_argument("dart " + std::to_string(dart) + " missing from face cycles");
  for (std::size_t i = 0; i < d.circles.size(); ++i) {
    const Circle& c = d.circles[i];
    if (!circle_index_.emplace(c.id, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate circle id " + std::to_string(c.id));
    if (!face_index_.count(c.inside_face) || !face_index_.count(c.outside_face))
      throw std::invalid_argument("circle " + std::to_string(c.id) + " references unknown face");
  }
  if (!face_index_.count(d.outer_face)) throw std::invalid_argument("outer_face is not a face");
}

int Index::dart_at(int crossing, int slot) const {
  return d_->crossings[crossing_index_.at(crossing)].darts[mod4(slot)];
}

int Index::theta(int dart) const {
  const Arc& a = arc(arc_of_.at(dart));
  return dart == a.tail ? a.head : a.tail;
}

int Index::rho(int dart) const {
  auto [c, s] = where_.at(dart);
  return dart_at(c, s + 1);
}

int Index::face_successor(int dart) const {
  int e = theta(dart);
  auto [c, s] = where_.at(e);
  return dart_at(c, s - 1);
}

int Index::quadrant_face(int crossing, int quadrant) const {
  return face_of_dart_.at(dart_at(crossing, quadrant));
}

int Index::quadrant_sign(int crossing, int quadrant) const {
  const Crossing& c = d_->crossings[crossing_index_.at(crossing)];
  return mod4(quadrant) % 2 == 0 ? c.sign0 : -c.sign0;
}

std::vector<int> Index::darts() const {
  std::vector<int> out;
  out.reserve(where_.size());
  for (const auto& [dart, loc] : where_) out.push_back(dart);
  return out;
}

std::vector<std::vector<int>> Index::crossing_pieces() const {
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& c : d_->crossings) parent[c.id] = c.id;
  for (const auto& a : d_->arcs) {
    int u = find(crossing_of(a.tail)), v = find(crossing_of(a.head));
    if (u != v) parent[u] = v;
  }
  std::map<int, std::vector<int>> groups;
  for (const auto& c : d_->crossings) groups[find(c.id)].push_back(c.id);
  std::vector<std::vector<int>> out;
  for (auto& [root, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    out.push_back(ids);
  }
  return out;
}

std::vector<std::vector<int>> face_orbits(const std::vector<Crossing>& crossings,
                                          const std::vector<Arc>& arcs) {
  std::map<int, std::pair<int, int>> where;  // dart -> (crossing vector index, slot)
  for (std::size_t i = 0; i < crossings.size(); ++i)
    for (int s = 0; s < 4; ++s) where[crossings[i].darts[s]] = {static_cast<int>(i), s};
  std::map<int, int> partner;
  for (const Arc& a : arcs) {
    partner[a.tail] = a.head;
    partner[a.head] = a.tail;
  }
  auto succ = [&](int dart) {
    auto [ci, slot] = where.at(partner.at(dart));
    return crossings[ci].darts[mod4(slot - 1)];
  };
  std::vector<std::vector<int>> orbits;
  std::set<int> done;
  for (const auto& [dart, loc] : where) {
    if (done.count(dart)) continue;
    std::vector<int> orbit;
    int cur = dart;
    do {
      orbit.push_back(cur);
      done.insert(cur);
      cur = succ(cur);
    } while (cur != dart);
    orbits.push_back(orbit);
  }
  return orbits;
}

std::string ValidationReport::joined() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i) os << "; ";
    os << errors[i];
  }
  return os.str();
}

namespace {

// Winding consistency: assign w(outer)=0 and propagate w(left)=w(right)+1
// across arcs and circles; report contradictions and unreachable faces.
void check_windings(const Index& ix, const Diagram& d, ValidationReport& rep) {
  std::map<int, int> w;
  w[d.outer_face] = 0;
  // weighted edges face->face
  struct Edge {
    int a, b, delta;  // w(a) = w(b) + delta
  };
  std::vector<Edge> edges;
  for (const Arc& a : d.arcs) edges.push_back({ix.left_face(a), ix.right_face(a), 1});
  for (const Circle& c : d.circles)
    edges.push_back({c.inside_face, c.outside_face, c.positive ? 1 : -1});
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
        rep.errors.push_back("winding cocycle violated between faces " + std::to_string(e.a) +
                             " and " + std::to_string(e.b));
        return;
      }
    }
  }
  for (const Face& f : d.faces)
    if (!w.count(f.id))
      rep.errors.push_back("face " + std::to_string(f.id) +
                           " unreachable from the outer face (disconnected arrangement)");
}

}  // namespace

ValidationReport validate(const Diagram& d) {
  ValidationReport rep;
  // Structural pass; Index construction pinpoints the first defect.
  try {
    Index ix(d);

    std::set<int> comps(d.components.begin(), d.components.end());
    if (comps.size() != d.components.size()) rep.errors.push_back("duplicate component ids");

    // Strand pairing: slots {0,2} and {1,3} each one head + one tail.
    for (const Crossing& c : d.crossings) {
      for (int par : {0, 1}) {
        int tails = 0, heads = 0;
        for (int s = par; s < 4; s += 2) (ix.is_tail(c.darts[s]) ? tails : heads)++;
        if (tails != 1 || heads != 1)
          rep.errors.push_back("strand pairing violated at crossing " + std::to_string(c.id));
      }
    }

    // Component closure: strand continuation stays on one component and the
    // arcs of a component form closed traversals.
    for (const Arc& a : d.arcs) {
      if (!comps.count(a.component))
        rep.errors.push_back("arc " + std::to_string(a.id) + " references unknown component");
      int h = a.head;
      int cont = ix.dart_at(ix.crossing_of(h), ix.slot_of(h) + 2);
      if (!ix.is_tail(cont))
        continue;  // strand pairing error already reported
      if (ix.arc(ix.arc_of(cont)).component != a.component)
        rep.errors.push_back("component changes through crossing " +
                             std::to_string(ix.crossing_of(h)));
    }
    for (const Circle& c : d.circles)
      if (!comps.count(c.component))
        rep.errors.push_back("circle " + std::to_string(c.id) + " references unknown component");

    // Face cycles must be exactly the orbits of the face permutation.
    for (const Face& f : d.faces)
      for (const auto& cyc : f.cycles) {
        if (cyc.empty()) {
          rep.errors.push_back("empty boundary cycle on face " + std::to_string(f.id));
          continue;
        }
        for (std::size_t i = 0; i < cyc.size(); ++i) {
          int next = cyc[(i + 1) % cyc.size()];
          if (ix.face_successor(cyc[i]) != next) {
            rep.errors.push_back("face " + std::to_string(f.id) +
                                 " boundary is not a face-permutation orbit");
            break;
          }
        }
      }

    // Sign alternation is structural with the derived encoding; sign0 must
    // still be a sign.
    for (const Crossing& c : d.crossings)
      if (c.sign0 != 1 && c.sign0 != -1)
        rep.errors.push_back("crossing " + std::to_string(c.id) + " sign is not +1/-1");

    // Areas: every face but the single outer one bounded and positive.
    int absent = 0;
    for (const Face& f : d.faces) {
      if (!f.area) {
        absent++;
        if (f.id != d.outer_face)
          rep.errors.push_back("face " + std::to_string(f.id) +
                               " has no area but is not the outer face");
      } else if (*f.area <= 0) {
        rep.errors.push_back("face " + std::to_string(f.id) +
                             " area must be a positive rational");
      }
    }
    if (absent != 1) rep.errors.push_back("exactly one face (the outer one) must have no area");

    // Generalized Euler count: V - E + F = 1 + #pieces.
    std::size_t pieces = ix.crossing_pieces().size() + d.circles.size();
    long long lhs = static_cast<long long>(d.crossings.size()) -
                    static_cast<long long>(d.arcs.size()) +
                    static_cast<long long>(d.faces.size());
    if (lhs != 1 + static_cast<long long>(pieces))
      rep.errors.push_back("Euler formula violated: V - E + F = " + std::to_string(lhs) +
                           ", expected " + std::to_string(1 + pieces));

    if (rep.ok()) check_windings(ix, d, rep);
  } catch (const std::exception& e) {
    rep.errors.push_back(e.what());
  }
  return rep;
}

void ensure_valid(const Diagram& d) {
  ValidationReport rep = validate(d);
  if (!rep.ok()) throw std::invalid_argument("invalid diagram: " + rep.joined());
}

}  // namespace ekd
