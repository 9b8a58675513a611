#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ekd/disks.hpp"
#include "ekd/invariants.hpp"

namespace ekd {

struct PairPreconditionReport {
  Rational area_lower, area_upper;      // a(D1), a(D2)
  Rational signed_lower, signed_upper;  // total signed areas
  int writhe_lower = 0, writhe_upper = 0;
  std::vector<int> rotation_lower, rotation_upper;  // sorted per-component multisets
  EulerReport euler;
  bool area_ok = false, signed_ok = false, rotation_ok = false, euler_ok = false;
  bool all_pass = false;
  std::vector<std::string> failures;
};

PairPreconditionReport preconditions(const DiagramPair& pair);

enum class EqualityPolicy { Conservative, CylinderSharp };

const char* policy_name(EqualityPolicy p);

struct LittleRecord {
  BoundDisk disk;
  char case_tag = 0;  // 'a'..'d'
  int relation = 0;   // area vs big: -1 smaller, 0 equal, +1 larger
  bool equality_admissible = false;
  std::string note;
};

struct BigDiskRecord {
  BoundDisk big;
  std::vector<LittleRecord> littles;
  std::optional<Rational> min_little_area;
  bool satisfied = false;
  std::string conclusion;
};

enum class VerdictResult { Obstructed, NoObstructionFound };

struct Verdict {
  VerdictResult result = VerdictResult::NoObstructionFound;
  std::vector<std::string> reasons;
  PairPreconditionReport preconditions;
  std::vector<BigDiskRecord> per_big;
  EqualityPolicy policy = EqualityPolicy::CylinderSharp;
  int euler_convention = +1;
  bool cylinder_rule_fired = false;
  std::vector<std::string> caveats;
};

// Decides the big/little disk obstruction for the ordered pair: OBSTRUCTED when a
// topological precondition fails or some big disk admits no little disk of
// smaller (or admissibly equal) area. NO_OBSTRUCTION_FOUND is never a
// constructive existence claim.
Verdict check_obstruction(const DiagramPair& pair,
                          EqualityPolicy policy = EqualityPolicy::CylinderSharp,
                          int euler_convention = +1);

std::vector<Verdict> batch_check(const std::vector<DiagramPair>& pairs, EqualityPolicy policy);

// Stable JSON report (exact rationals as "p/q" strings).
std::string verdict_to_json(const Verdict& v, bool pretty = true);

}  // namespace ekd
