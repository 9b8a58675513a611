#include "ekd/disks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ekd/invariants.hpp"

namespace ekd {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

}  // namespace

const char* side_name(Side s) { return s == Side::Lower ? "lower" : "upper"; }

std::string BoundDisk::key() const {
  std::ostringstream os;
  os << side_name(side) << ':';
  for (int f : faces) os << f << ',';
  return os.str();
}

std::optional<BoundDisk> classify_region(const Diagram& d, const Index& ix,
                                         const std::set<int>& faces, Side side) {
  if (faces.empty()) return std::nullopt;
  for (int f : faces)
    if (f == d.outer_face) return std::nullopt;

  auto in = [&](int face) { return faces.count(face) != 0; };

  // Quadrant pattern per incident crossing; opposite-pair patterns pinch the
  // region and are rejected as non-immersed.
  std::set<int> crossings;
  for (const Crossing& c : d.crossings) {
    int mask = 0;
    for (int k = 0; k < 4; ++k)
      if (in(ix.quadrant_face(c.id, k))) mask |= 1 << k;
    if (mask == 0) continue;
    if (mask == 0b0101 || mask == 0b1010) return std::nullopt;
    crossings.insert(c.id);
  }

  // Connectivity across shared arcs and circles.
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int f : faces) parent[f] = f;
  int edge_arcs = 0;
  for (const Arc& a : d.arcs) {
    int l = ix.left_face(a), r = ix.right_face(a);
    if (in(l) || in(r)) edge_arcs++;
    if (in(l) && in(r)) parent[find(l)] = find(r);
  }
  for (const Circle& c : d.circles)
    if (in(c.inside_face) && in(c.outside_face))
      parent[find(c.inside_face)] = find(c.outside_face);
  int roots = 0;
  for (int f : faces)
    if (find(f) == f) roots++;
  if (roots != 1) return std::nullopt;

  // Euler characteristic of the closed region: crossings - arcs + face terms,
  // a face contributing 2 - #boundary cycles; circles are a vertex plus an
  // edge and cancel.
  std::map<int, int> face_cycles;
  for (int f : faces) face_cycles[f] = static_cast<int>(ix.face(f).cycles.size());
  for (const Circle& c : d.circles) {
    if (in(c.inside_face)) face_cycles[c.inside_face]++;
    if (in(c.outside_face)) face_cycles[c.outside_face]++;
  }
  long long chi = static_cast<long long>(crossings.size()) - edge_arcs;
  for (int f : faces) chi += 2 - face_cycles[f];
  if (chi != 1) return std::nullopt;

  BoundDisk disk;
  disk.side = side;
  disk.faces = faces;
  for (int f : faces) disk.area += *ix.face(f).area;

  // Boundary: arcs/circles with exactly one side in the region.
  std::vector<std::pair<int, int>> boundary;  // (arc, dir with region on the left)
  for (const Arc& a : d.arcs) {
    bool l = in(ix.left_face(a)), r = in(ix.right_face(a));
    if (l && !r) boundary.push_back({a.id, +1});
    if (r && !l) boundary.push_back({a.id, -1});
  }
  std::vector<int> boundary_circles;
  for (const Circle& c : d.circles)
    if (in(c.inside_face) != in(c.outside_face)) boundary_circles.push_back(c.id);

  if (boundary.empty()) {
    if (boundary_circles.size() != 1) return std::nullopt;
    disk.boundary_circle = boundary_circles[0];
    disk.aligned = true;
    return disk;
  }
  if (!boundary_circles.empty()) return std::nullopt;

  // Walk the boundary counterclockwise (region on the left), reading corners
  // from the maximal fan of in-region quadrants at each crossing.
  std::sort(boundary.begin(), boundary.end());
  std::set<std::pair<int, int>> remaining(boundary.begin(), boundary.end());
  auto [arc0, dir0] = boundary.front();
  int arc = arc0, dir = dir0;
  do {
    if (!remaining.erase({arc, dir})) return std::nullopt;  // revisited: not a single cycle
    disk.boundary_walk.push_back({arc, dir});
    const Arc& a = ix.arc(arc);
    int far = dir > 0 ? a.head : a.tail;
    int r = ix.slot_of(far);
    int crossing = ix.crossing_of(far);
    int m = 0;
    while (m < 3 && in(ix.quadrant_face(crossing, r - 1 - m))) m++;
    if (m == 0) return std::nullopt;
    if (m == 1) {
      int q = mod4(r - 1);
      disk.corners.push_back({crossing, q, ix.quadrant_sign(crossing, q), true});
    } else if (m == 3) {
      int q = mod4(r + 1);
      disk.corners.push_back({crossing, q, ix.quadrant_sign(crossing, q), false});
      disk.all_convex = false;
    }
    int out = ix.dart_at(crossing, r - m);
    arc = ix.arc_of(out);
    dir = ix.is_tail(out) ? +1 : -1;
  } while (!(arc == arc0 && dir == dir0));
  if (!remaining.empty()) return std::nullopt;  // second boundary component

  bool all_pos = true, all_neg = true;
  for (const auto& [aid, adir] : disk.boundary_walk) (adir > 0 ? all_neg : all_pos) = false;
  disk.aligned = all_pos || all_neg;
  return disk;
}

std::vector<BoundDisk> enumerate_disks(const Diagram& d, const EnumerateOptions& opts,
                                       Side side) {
  ensure_valid(d);
  Index ix(d);

  // Face adjacency over shared arcs and circles.
  std::map<int, std::set<int>> adj;
  for (const Arc& a : d.arcs) {
    int l = ix.left_face(a), r = ix.right_face(a);
    adj[l].insert(r);
    adj[r].insert(l);
  }
  for (const Circle& c : d.circles) {
    adj[c.inside_face].insert(c.outside_face);
    adj[c.outside_face].insert(c.inside_face);
  }

  std::vector<int> bounded;
  for (const Face& f : d.faces)
    if (f.area) bounded.push_back(f.id);
  std::sort(bounded.begin(), bounded.end());

  // Enumerate connected subsets once each, rooted at their smallest face:
  // branch on including/banning the head of the extension list.
  std::vector<BoundDisk> out;
  auto consider = [&](const std::set<int>& subset) {
    auto disk = classify_region(d, ix, subset, side);
    if (!disk) return;
    if (opts.max_corners && static_cast<int>(disk->corners.size()) > *opts.max_corners) return;
    if (opts.require_convex && !disk->all_convex) return;
    out.push_back(*disk);
  };
  int root = -1;
  auto admissible = [&](int g, const std::set<int>& cur, const std::set<int>& banned,
                        const std::vector<int>& ext) {
    return g > root && g != d.outer_face && !cur.count(g) && !banned.count(g) &&
           std::find(ext.begin(), ext.end(), g) == ext.end();
  };
  std::function<void(std::set<int>&, std::vector<int>, std::set<int>&)> extend =
      [&](std::set<int>& cur, std::vector<int> ext, std::set<int>& banned) {
        if (ext.empty()) return;
        int f = ext.front();
        std::vector<int> rest(ext.begin() + 1, ext.end());
        // include f
        cur.insert(f);
        std::vector<int> grown = rest;
        for (int g : adj[f])
          if (admissible(g, cur, banned, grown)) grown.push_back(g);
        consider(cur);
        extend(cur, grown, banned);
        cur.erase(f);
        // exclude f for the remainder of this branch
        banned.insert(f);
        extend(cur, rest, banned);
        banned.erase(f);
      };
  for (int r : bounded) {
    root = r;
    std::set<int> cur{r};
    std::set<int> banned;
    std::vector<int> ext;
    for (int g : adj[r])
      if (admissible(g, cur, banned, ext)) ext.push_back(g);
    consider(cur);
    extend(cur, ext, banned);
  }

  std::sort(out.begin(), out.end(), [](const BoundDisk& a, const BoundDisk& b) {
    if (a.area != b.area) return a.area < b.area;
    if (a.corners.size() != b.corners.size()) return a.corners.size() < b.corners.size();
    return a.key() < b.key();
  });
  return out;
}

std::optional<Rational> maslov_table_sum(const std::vector<int>& cyclic_signs, Side side) {
  if (cyclic_signs.empty()) return Rational(0);
  auto upper_entry = [](int from, int to) -> Rational {
    if (from < 0 && to < 0) return -1;
    if (from < 0 && to > 0) return Rational(-1, 4);
    if (from > 0 && to > 0) return 0;
    return Rational(-3, 4);
  };
  Rational sum = 0;
  for (std::size_t i = 0; i < cyclic_signs.size(); ++i) {
    int from = cyclic_signs[i], to = cyclic_signs[(i + 1) % cyclic_signs.size()];
    // The lower table mirrors the upper one with both signs flipped.
    sum += side == Side::Upper ? upper_entry(from, to) : upper_entry(-from, -to);
  }
  return sum;
}

DiskAnalysis disk_analysis(const Diagram& d, const BoundDisk& disk, Side side) {
  (void)d;
  DiskAnalysis an;
  an.all_convex = disk.all_convex;
  an.aligned = disk.aligned;
  for (const CornerIncidence& c : disk.corners) an.corner_signs.push_back(c.sign);
  if (disk.all_convex) {
    auto sum = maslov_table_sum(an.corner_signs, side);
    if (sum) {
      if (denominator(*sum) != 1)
        throw std::logic_error("maslov table sum is not an integer on a closed corner cycle");
      an.maslov_normal = static_cast<int>(numerator(*sum).convert_to<long long>());
      an.expected_dim = *an.maslov_normal + 1;
    }
  }
  return an;
}

std::vector<BoundDisk> pair_disks(const DiagramPair& pair) {
  std::vector<BoundDisk> all = enumerate_disks(pair.lower, {}, Side::Lower);
  std::vector<BoundDisk> up = enumerate_disks(pair.upper, {}, Side::Upper);
  all.insert(all.end(), up.begin(), up.end());
  return all;
}

bool is_big_disk(const DiagramPair& pair, const BoundDisk& disk) {
  if (!disk.all_convex || !disk.aligned) return false;
  int wanted = disk.side == Side::Lower ? -1 : +1;
  for (const CornerIncidence& c : disk.corners)
    if (c.sign != wanted) return false;
  Rational a_lower = knot_area(pair.lower), a_upper = knot_area(pair.upper);
  return (a_lower == 0 && a_upper == 0) || disk.area <= a_lower;
}

std::vector<BoundDisk> big_disks(const DiagramPair& pair) {
  std::vector<BoundDisk> out;
  for (const BoundDisk& disk : pair_disks(pair))
    if (is_big_disk(pair, disk)) out.push_back(disk);
  return out;
}

namespace {

// Does `big` have a corner at this crossing with this sign? (Multiplicity-one
// disks carry at most one corner per crossing.)
bool shared_with(const BoundDisk& big, const CornerIncidence& c) {
  for (const CornerIncidence& b : big.corners)
    if (b.crossing == c.crossing && b.sign == c.sign) return true;
  return false;
}

bool shares_every_corner_of(const BoundDisk& a, const BoundDisk& b) {
  // every corner of `a` appears on `b` with the same sign
  for (const CornerIncidence& ca : a.corners) {
    bool found = false;
    for (const CornerIncidence& cb : b.corners)
      if (cb.crossing == ca.crossing && cb.sign == ca.sign) found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace

char little_disk_case(const BoundDisk& big, const BoundDisk& cand) {
  if (cand.same_region(big)) return 0;
  if (big.side == Side::Upper && cand.side == Side::Upper) {
    bool has_negative = false;
    for (const CornerIncidence& c : cand.corners) {
      if (c.sign == +1 && !shared_with(big, c)) return 0;
      if (c.sign == -1) has_negative = true;
    }
    if (!has_negative && !shares_every_corner_of(big, cand)) return 0;
    return 'a';
  }
  if (big.side == Side::Lower && cand.side == Side::Lower) {
    bool has_positive = false;
    for (const CornerIncidence& c : cand.corners) {
      if (c.sign == -1 && !shared_with(big, c)) return 0;
      if (c.sign == +1) has_positive = true;
    }
    if (!has_positive && !shares_every_corner_of(big, cand)) return 0;
    return 'b';
  }
  if (big.side == Side::Upper && cand.side == Side::Lower) {
    for (const CornerIncidence& c : cand.corners)
      if (c.sign != +1) return 0;
    if (!big.corners.empty() && cand.corners.empty()) return 0;
    return 'c';
  }
  // big on lower, candidate on upper
  for (const CornerIncidence& c : cand.corners)
    if (c.sign != -1) return 0;
  if (!big.corners.empty() && cand.corners.empty()) return 0;
  return 'd';
}

std::vector<BoundDisk> little_disks(const DiagramPair& pair, const BoundDisk& big) {
  if (!is_big_disk(pair, big)) throw std::invalid_argument("disk is not big for this pair");
  std::vector<BoundDisk> out;
  for (const BoundDisk& cand : pair_disks(pair))
    if (little_disk_case(big, cand) != 0) out.push_back(cand);
  return out;
}

bool shares_all_corners(const BoundDisk& a, const BoundDisk& b) {
  if (a.side != b.side) return a.corners.empty() && b.corners.empty();
  return shares_every_corner_of(a, b) && shares_every_corner_of(b, a);
}

}  // namespace ekd
