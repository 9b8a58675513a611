#pragma once

#include <optional>
#include <set>
#include <vector>

#include "ekd/diagram.hpp"

namespace ekd {

enum class Side { Lower, Upper };

const char* side_name(Side s);

struct CornerIncidence {
  int crossing = -1;
  int quadrant = -1;  // the occupied quadrant carrying the corner's sign
  int sign = 0;       // equals the diagram's sigma at (crossing, quadrant)
  bool convex = true;
};

// A multiplicity-one disk bound by a diagram: a connected, simply connected
// union of bounded faces with immersed boundary.
struct BoundDisk {
  Side side = Side::Lower;
  std::set<int> faces;
  std::vector<std::pair<int, int>> boundary_walk;  // (arc id, +1/-1), counterclockwise
  std::optional<int> boundary_circle;              // when the boundary is a crossing-free circle
  std::vector<CornerIncidence> corners;            // cyclic, in walk order
  Rational area;
  bool aligned = false;
  bool all_convex = true;

  bool same_region(const BoundDisk& o) const { return side == o.side && faces == o.faces; }
  std::string key() const;
};

struct EnumerateOptions {
  std::optional<int> max_corners;
  bool require_convex = false;
};

// All multiplicity-one disks of the diagram, sorted by (area, corner count,
// canonical key).
std::vector<BoundDisk> enumerate_disks(const Diagram& d, const EnumerateOptions& opts = {},
                                       Side side = Side::Lower);

// Classifies one face subset; nullopt when the union is not a disk.
std::optional<BoundDisk> classify_region(const Diagram& d, const Index& ix,
                                         const std::set<int>& faces, Side side);

struct DiskAnalysis {
  bool all_convex = true;
  std::vector<int> corner_signs;
  bool aligned = false;
  std::optional<int> maslov_normal;  // mu_2, defined for all-convex disks
  std::optional<int> expected_dim;   // mu_2 + 1
};

DiskAnalysis disk_analysis(const Diagram& d, const BoundDisk& disk, Side side);

// Normal Maslov index from the cyclic corner-sign sequence via the side's
// rotation table; nullopt when the table sum is not defined.
std::optional<Rational> maslov_table_sum(const std::vector<int>& cyclic_signs, Side side);

struct DiagramPair {
  Diagram lower;
  Diagram upper;
};

std::vector<BoundDisk> pair_disks(const DiagramPair& pair);
std::vector<BoundDisk> big_disks(const DiagramPair& pair);
std::vector<BoundDisk> little_disks(const DiagramPair& pair, const BoundDisk& big);
bool is_big_disk(const DiagramPair& pair, const BoundDisk& disk);
// One of the four sign/side configurations of a little disk, or 0.
char little_disk_case(const BoundDisk& big, const BoundDisk& candidate);

bool shares_all_corners(const BoundDisk& a, const BoundDisk& b);

}  // namespace ekd
