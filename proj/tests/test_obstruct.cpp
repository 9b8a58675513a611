#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ekd/families.hpp"
#include "ekd/obstruct.hpp"
#include "support.hpp"

using namespace ekd;

namespace {

bool obstructed(const DiagramPair& pair,
                EqualityPolicy policy = EqualityPolicy::CylinderSharp) {
  return check_obstruction(pair, policy).result == VerdictResult::Obstructed;
}

Diagram tre(int sign, const Rational& x) {
  Rational lobe = (Rational(15) - 2 * x) / 3;
  return build_trefoil(sign, {lobe, lobe, lobe}, x);
}

}  // namespace

TEST_CASE("preconditions: unknot areas must match") {
  PairPreconditionReport rep = preconditions({build_unknot(1), build_unknot(2)});
  CHECK_FALSE(rep.area_ok);
  CHECK_FALSE(rep.all_pass);
  Verdict v = check_obstruction({build_unknot(1), build_unknot(2)});
  CHECK(v.result == VerdictResult::Obstructed);
  REQUIRE(!v.reasons.empty());
  CHECK(v.reasons[0].find("topological precondition") != std::string::npos);
}

TEST_CASE("preconditions: equal unknots pass with a cylinder") {
  PairPreconditionReport rep = preconditions({build_unknot(1), build_unknot(1)});
  CHECK(rep.all_pass);
  CHECK(rep.euler.cylinder);
  Verdict v = check_obstruction({build_unknot(1), build_unknot(1)});
  CHECK(v.result == VerdictResult::NoObstructionFound);
}

TEST_CASE("preconditions: exact eight pairs are cylinders") {
  PairPreconditionReport rep = preconditions({build_eight(+1, 1), build_eight(+1, 2)});
  CHECK(rep.all_pass);
  CHECK(rep.euler.cylinder);
  CHECK(rep.writhe_lower == 1);
  CHECK(rep.writhe_upper == 1);
}

TEST_CASE("eight monotonicity sweep over a 10x10 grid") {
  std::vector<Rational> grid;
  for (int n = 1; n <= 10; ++n) grid.push_back(Rational(n, 3));
  for (const Rational& a : grid)
    for (const Rational& b : grid) {
      CHECK(obstructed({build_eight(+1, a), build_eight(+1, b)}) == (a >= b));
      CHECK(obstructed({build_eight(-1, a), build_eight(-1, b)}) == (a <= b));
    }
}

TEST_CASE("equality policies bracket the equal-area case") {
  DiagramPair shrink{build_eight(+1, 2), build_eight(+1, 1)};
  CHECK(obstructed(shrink, EqualityPolicy::CylinderSharp));
  // conservatively, the equal-area same-side lobe is admissible
  CHECK_FALSE(obstructed(shrink, EqualityPolicy::Conservative));
  Verdict sharp = check_obstruction(shrink, EqualityPolicy::CylinderSharp);
  CHECK(sharp.cylinder_rule_fired);
}

TEST_CASE("trefoil family sweep") {
  std::vector<Rational> grid = {Rational(1, 2), 1, Rational(3, 2), 2, Rational(5, 2)};
  for (const Rational& a : grid)
    for (const Rational& b : grid) {
      CHECK(obstructed({tre(-1, a), tre(-1, b)}) == (a <= b));
      CHECK(obstructed({tre(+1, a), tre(+1, b)}) == (a >= b));
    }
}

TEST_CASE("e-diagram sweep") {
  std::vector<Rational> grid = {Rational(1, 2), 1, 2};
  for (const Rational& a : grid)
    for (const Rational& b : grid) {
      CHECK(obstructed({build_e_diagram(-1, a, 4), build_e_diagram(-1, b, 4)}) == (a <= b));
      CHECK(obstructed({build_e_diagram(+1, a, 4), build_e_diagram(+1, b, 4)}) == (a >= b));
    }
}

TEST_CASE("chain area conditions") {
  Diagram chain = build({Family::Chain, {-1, +1, +1}, {4, 3, 2}});
  CHECK_FALSE(obstructed({build_eight(+1, 1), chain}));
  CHECK(obstructed({build_eight(+1, 2), chain}));
  CHECK(obstructed({build_eight(+1, 3), chain}));
}

TEST_CASE("unrelated pair is obstructed both ways") {
  Diagram c = build({Family::Chain, {+1, -1, +1}, {1, 2, 2}});
  Diagram e = build_eight(+1, 1);
  CHECK(obstructed({e, c}));
  CHECK(obstructed({c, e}));
  // the first direction needs no cylinder extrapolation
  Verdict v = check_obstruction({e, c}, EqualityPolicy::Conservative);
  CHECK(v.result == VerdictResult::Obstructed);
}

TEST_CASE("self-pairs of exact diagrams with big disks are obstructed") {
  for (auto& [name, d] : corpus()) {
    if (!is_exact(d)) continue;
    INFO(name);
    DiagramPair self{d, d};
    Verdict v = check_obstruction(self, EqualityPolicy::CylinderSharp);
    if (big_disks(self).empty()) {
      CHECK(v.result == VerdictResult::NoObstructionFound);
      bool silent = false;
      for (const std::string& r : v.reasons)
        if (r.find("criterion silent") != std::string::npos) silent = true;
      CHECK(silent);
    } else {
      CHECK(v.result == VerdictResult::Obstructed);
    }
  }
}

TEST_CASE("verdicts are invariant under relabeling") {
  std::mt19937 rng(43);
  std::vector<DiagramPair> pairs = {
      {build_eight(+1, 1), build_eight(+1, 2)},
      {build_eight(+1, 2), build_eight(+1, 1)},
      {tre(-1, 1), tre(-1, 2)},
      {build_eight(+1, 1), build({Family::Chain, {+1, -1, +1}, {1, 2, 2}})},
  };
  for (const DiagramPair& pair : pairs) {
    Verdict base = check_obstruction(pair);
    for (int i = 0; i < 5; ++i) {
      DiagramPair r{ekd::test::relabeled(pair.lower, rng),
                    ekd::test::relabeled(pair.upper, rng)};
      CHECK(check_obstruction(r).result == base.result);
    }
  }
}

TEST_CASE("batch check maps pairs in order and is pure") {
  CHECK(batch_check({}, EqualityPolicy::CylinderSharp).empty());
  std::vector<DiagramPair> pairs = {{build_eight(+1, 1), build_eight(+1, 2)},
                                    {build_eight(+1, 2), build_eight(+1, 1)},
                                    {build_eight(+1, 2), build_eight(+1, 1)}};
  auto verdicts = batch_check(pairs, EqualityPolicy::CylinderSharp);
  REQUIRE(verdicts.size() == 3);
  CHECK(verdicts[0].result == VerdictResult::NoObstructionFound);
  CHECK(verdicts[1].result == VerdictResult::Obstructed);
  CHECK(verdict_to_json(verdicts[1]) == verdict_to_json(verdicts[2]));
}

TEST_CASE("verdict json carries exact areas and caveats") {
  Verdict v = check_obstruction({build_eight(+1, 2), build_eight(+1, 1)});
  std::string js = verdict_to_json(v);
  CHECK(js.find("\"result\": \"OBSTRUCTED\"") != std::string::npos);
  CHECK(js.find("multiplicity-1") != std::string::npos);
  CHECK(js.find("\"policy\": \"cylinder-sharp\"") != std::string::npos);
  Verdict never = check_obstruction({build_eight(+1, 1), build_eight(+1, 2)});
  std::string js2 = verdict_to_json(never);
  CHECK(js2.find("not a constructive existence claim") != std::string::npos);
}

TEST_CASE("euler convention flag only relabels the chi reading") {
  DiagramPair pair{tre(-1, 1), build_eight(-1, 1)};
  Verdict plus = check_obstruction(pair, EqualityPolicy::CylinderSharp, +1);
  Verdict minus = check_obstruction(pair, EqualityPolicy::CylinderSharp, -1);
  CHECK(plus.result == minus.result);
}
