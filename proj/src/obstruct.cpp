#include "ekd/obstruct.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ekd {

const char* policy_name(EqualityPolicy p) {
  return p == EqualityPolicy::Conservative ? "conservative" : "cylinder-sharp";
}

PairPreconditionReport preconditions(const DiagramPair& pair) {
  PairPreconditionReport rep;
  rep.signed_lower = total_signed_area(pair.lower);
  rep.signed_upper = total_signed_area(pair.upper);
  rep.area_lower = rep.signed_lower < 0 ? Rational(-rep.signed_lower) : rep.signed_lower;
  rep.area_upper = rep.signed_upper < 0 ? Rational(-rep.signed_upper) : rep.signed_upper;
  rep.writhe_lower = writhe(pair.lower);
  rep.writhe_upper = writhe(pair.upper);
  rep.rotation_lower = rotation_numbers(pair.lower);
  rep.rotation_upper = rotation_numbers(pair.upper);
  std::sort(rep.rotation_lower.begin(), rep.rotation_lower.end());
  std::sort(rep.rotation_upper.begin(), rep.rotation_upper.end());
  rep.euler = forced_euler_characteristic(pair.lower, pair.upper);

  rep.area_ok = rep.area_lower == rep.area_upper;
  rep.signed_ok = rep.signed_lower == rep.signed_upper;
  rep.rotation_ok = rep.rotation_lower == rep.rotation_upper;
  rep.euler_ok = rep.euler.feasible_either;
  if (!rep.area_ok)
    rep.failures.push_back("knot areas differ: a(lower) = " + to_string(rep.area_lower) +
                           ", a(upper) = " + to_string(rep.area_upper));
  if (!rep.signed_ok)
    rep.failures.push_back("total signed areas differ: " + to_string(rep.signed_lower) + " vs " +
                           to_string(rep.signed_upper));
  if (!rep.rotation_ok) rep.failures.push_back("rotation numbers differ");
  if (!rep.euler_ok)
    rep.failures.push_back("no orientable cobordism topology fits the writhe difference " +
                           std::to_string(rep.writhe_lower - rep.writhe_upper));
  rep.all_pass = rep.area_ok && rep.signed_ok && rep.rotation_ok && rep.euler_ok;
  return rep;
}

namespace {

struct EqualityCall {
  bool admissible = false;
  bool cylinder_rule = false;
  std::string note;
};

EqualityCall equality_admissible(const BoundDisk& big, const BoundDisk& little,
                                 const PairPreconditionReport& pre, EqualityPolicy policy) {
  EqualityCall call;
  if (!shares_all_corners(big, little)) {
    call.note = "equal area but corners not all shared";
    return call;
  }
  if (policy == EqualityPolicy::CylinderSharp && pre.euler.cylinder &&
      big.side == little.side) {
    call.cylinder_rule = true;
    call.note = "equal area, all corners shared, but distinct disks on one side of a cylinder "
                "represent distinct classes";
    return call;
  }
  call.admissible = true;
  call.note = "equal area with all corners shared: criterion satisfied with equality";
  return call;
}

}  // namespace

Verdict check_obstruction(const DiagramPair& pair, EqualityPolicy policy, int euler_convention) {
  if (euler_convention != 1 && euler_convention != -1)
    throw std::invalid_argument("euler convention must be +1 or -1");
  Verdict v;
  v.policy = policy;
  v.euler_convention = euler_convention;
  v.preconditions = preconditions(pair);
  v.caveats.push_back("disk search restricted to multiplicity-1 face unions");
  v.caveats.push_back(std::string("equality policy: ") + policy_name(policy));
  v.caveats.push_back(std::string("euler sign convention: chi = ") +
                      (euler_convention > 0 ? "wr(lower) - wr(upper)" : "wr(upper) - wr(lower)"));

  if (!v.preconditions.all_pass) {
    v.result = VerdictResult::Obstructed;
    for (const std::string& f : v.preconditions.failures)
      v.reasons.push_back("topological precondition: " + f);
    return v;
  }

  std::vector<BoundDisk> bigs = big_disks(pair);
  if (bigs.empty()) {
    v.result = VerdictResult::NoObstructionFound;
    v.reasons.push_back("criterion silent: the pair binds no big disk");
    return v;
  }

  bool obstructed = false;
  for (const BoundDisk& big : bigs) {
    BigDiskRecord rec;
    rec.big = big;
    bool satisfied = false;
    for (const BoundDisk& cand : little_disks(pair, big)) {
      LittleRecord lr;
      lr.disk = cand;
      lr.case_tag = little_disk_case(big, cand);
      lr.relation = cand.area < big.area ? -1 : (cand.area == big.area ? 0 : +1);
      if (!rec.min_little_area || cand.area < *rec.min_little_area)
        rec.min_little_area = cand.area;
      if (lr.relation < 0) {
        lr.note = "strictly smaller area: criterion satisfied";
        satisfied = true;
      } else if (lr.relation == 0) {
        EqualityCall call = equality_admissible(big, cand, v.preconditions, policy);
        lr.equality_admissible = call.admissible;
        lr.note = call.note;
        if (call.cylinder_rule) v.cylinder_rule_fired = true;
        if (call.admissible) satisfied = true;
      } else {
        lr.note = "larger area";
      }
      rec.littles.push_back(lr);
    }
    rec.satisfied = satisfied;
    rec.conclusion = satisfied
                         ? "a little disk of admissible area exists"
                         : "no admissible little disk: the big/little disk criterion obstructs";
    if (!satisfied) {
      obstructed = true;
      v.reasons.push_back("big disk (" + std::string(side_name(big.side)) + ", area " +
                          to_string(big.area) + ") admits no little disk of area <= " +
                          to_string(big.area));
    }
    v.per_big.push_back(rec);
  }
  if (v.cylinder_rule_fired)
    v.caveats.push_back(
        "cylinder-sharp equality rule applied (distinct same-side disks on a forced "
        "cylinder represent distinct relative homology classes)");
  v.result = obstructed ? VerdictResult::Obstructed : VerdictResult::NoObstructionFound;
  if (!obstructed)
    v.reasons.push_back(
        "every big disk admits a little disk; NO_OBSTRUCTION_FOUND is not a constructive "
        "existence claim");
  return v;
}

std::vector<Verdict> batch_check(const std::vector<DiagramPair>& pairs, EqualityPolicy policy) {
  std::vector<Verdict> out;
  out.reserve(pairs.size());
  for (const DiagramPair& p : pairs) out.push_back(check_obstruction(p, policy));
  return out;
}

namespace {

using ordered = nlohmann::ordered_json;

ordered disk_json(const BoundDisk& d) {
  ordered o;
  o["side"] = side_name(d.side);
  o["faces"] = std::vector<int>(d.faces.begin(), d.faces.end());
  o["area"] = to_string(d.area);
  o["aligned"] = d.aligned;
  o["all_convex"] = d.all_convex;
  o["corners"] = ordered::array();
  for (const CornerIncidence& c : d.corners) {
    ordered co;
    co["crossing"] = c.crossing;
    co["quadrant"] = c.quadrant;
    co["sign"] = c.sign;
    co["convex"] = c.convex;
    o["corners"].push_back(co);
  }
  return o;
}

}  // namespace

std::string verdict_to_json(const Verdict& v, bool pretty) {
  ordered o;
  o["result"] = v.result == VerdictResult::Obstructed ? "OBSTRUCTED" : "NO_OBSTRUCTION_FOUND";
  o["policy"] = policy_name(v.policy);
  o["euler_convention"] = v.euler_convention > 0 ? "+" : "-";
  o["reasons"] = v.reasons;
  const PairPreconditionReport& p = v.preconditions;
  ordered pre;
  pre["area_lower"] = to_string(p.area_lower);
  pre["area_upper"] = to_string(p.area_upper);
  pre["signed_area_lower"] = to_string(p.signed_lower);
  pre["signed_area_upper"] = to_string(p.signed_upper);
  pre["writhe_lower"] = p.writhe_lower;
  pre["writhe_upper"] = p.writhe_upper;
  pre["rotation_lower"] = p.rotation_lower;
  pre["rotation_upper"] = p.rotation_upper;
  int chi = v.euler_convention > 0 ? p.euler.plus.chi : p.euler.minus.chi;
  pre["euler_characteristic"] = chi;
  pre["euler_characteristic_other_convention"] = -chi;
  pre["euler_feasible"] = p.euler_ok;
  pre["cylinder"] = p.euler.cylinder;
  ordered pass;
  pass["area"] = p.area_ok;
  pass["signed_area"] = p.signed_ok;
  pass["rotation"] = p.rotation_ok;
  pass["euler"] = p.euler_ok;
  pre["pass"] = pass;
  o["preconditions"] = pre;
  o["big_disks"] = ordered::array();
  for (const BigDiskRecord& rec : v.per_big) {
    ordered r;
    r["big"] = disk_json(rec.big);
    r["littles"] = ordered::array();
    for (const LittleRecord& lr : rec.littles) {
      ordered l;
      l["disk"] = disk_json(lr.disk);
      l["case"] = std::string(1, lr.case_tag);
      l["relation"] = lr.relation < 0 ? "<" : (lr.relation == 0 ? "=" : ">");
      l["equality_admissible"] = lr.equality_admissible;
      l["note"] = lr.note;
      r["littles"].push_back(l);
    }
    r["min_little_area"] = rec.min_little_area ? ordered(to_string(*rec.min_little_area))
                                               : ordered(nullptr);
    r["satisfied"] = rec.satisfied;
    r["conclusion"] = rec.conclusion;
    o["big_disks"].push_back(r);
  }
  o["caveats"] = v.caveats;
  return pretty ? o.dump(2) + "\n" : o.dump();
}

}  // namespace ekd
