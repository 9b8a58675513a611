#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "ekd/canonical.hpp"
#include "ekd/families.hpp"
#include "ekd/invariants.hpp"
#include "ekd/io.hpp"
#include "ekd/moves.hpp"
#include "ekd/obstruct.hpp"
#include "support.hpp"

using namespace ekd;

namespace {

MoveInstance r0(std::map<int, Rational> eps) {
  MoveInstance m;
  m.kind = MoveKind::R0;
  m.epsilons = std::move(eps);
  return m;
}

void check_postconditions(const Diagram& before, const Diagram& after) {
  CHECK(validate(after).ok());
  CHECK(total_signed_area(after) == total_signed_area(before));
}

const MoveInstance* find_template(const std::vector<MoveInstance>& all, MoveKind kind) {
  for (const MoveInstance& m : all)
    if (m.kind == kind) return &m;
  return nullptr;
}

}  // namespace

TEST_CASE("R0 on the positive eight must grow both lobes") {
  Diagram d = build_eight(+1, 1);
  Diagram grown = apply_move(d, r0({{0, 1}, {1, 1}}));
  check_postconditions(d, grown);
  CHECK(are_equivalent(grown, build_eight(+1, 2)));

  CHECK_THROWS_WITH_AS(apply_move(d, r0({{0, Rational(-1, 2)}, {1, Rational(-1, 2)}})),
                       doctest::Contains("condition 3"), MoveError);
  // area balance is checked exactly (both lobes grow, but unevenly)
  CHECK_THROWS_WITH_AS(apply_move(d, r0({{0, 1}, {1, 2}})), doctest::Contains("condition 1"),
                       MoveError);
}

TEST_CASE("R0 on the negative eight must shrink within the areas") {
  Diagram d = build_eight(-1, 2);
  Diagram shrunk = apply_move(d, r0({{0, -1}, {1, -1}}));
  CHECK(are_equivalent(shrunk, build_eight(-1, 1)));
  CHECK_THROWS_WITH_AS(apply_move(d, r0({{0, 1}, {1, 1}})), doctest::Contains("condition 4"),
                       MoveError);
  CHECK_THROWS_WITH_AS(apply_move(d, r0({{0, -2}, {1, -2}})), doctest::Contains("condition 2"),
                       MoveError);
}

TEST_CASE("R0 on the unknot admits only the trivial redistribution") {
  Diagram d = build_unknot(1);
  Diagram same = apply_move(d, r0({}));
  CHECK(are_equivalent(same, d));
  CHECK_THROWS_WITH_AS(apply_move(d, r0({{0, 1}})), doctest::Contains("condition 1"), MoveError);
}

TEST_CASE("applicable templates on the unknot") {
  Diagram d = build_unknot(1);
  auto moves = applicable_moves(d);
  CHECK(find_template(moves, MoveKind::R0));
  CHECK(find_template(moves, MoveKind::Birth));
  CHECK_FALSE(find_template(moves, MoveKind::Death));
  CHECK_FALSE(find_template(moves, MoveKind::R1Minus));
}

TEST_CASE("R1+ adds a positive kink to the eight") {
  Diagram d = build_eight(+1, 1);
  // poke into lobe 0: the new lobe winds at w(lobe 0) + 1 = 2, and both
  // positive lobes must still strictly grow
  MoveInstance plus;
  plus.kind = MoveKind::R1Plus;
  plus.arc = 0;
  plus.side = +1;
  plus.delta = Rational(1, 4);
  Diagram kinked;
  bool applied = false;
  std::vector<Rational> c = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  for (const Rational& e0 : c) {
    for (const Rational& e1 : c) {
      MoveInstance attempt = plus;
      attempt.epsilons = {{0, e0}, {1, e1}};
      try {
        kinked = apply_move(d, attempt);
        applied = true;
      } catch (const MoveError&) {
        continue;
      }
      break;
    }
    if (applied) break;
  }
  REQUIRE(applied);
  check_postconditions(d, kinked);
  CHECK(kinked.crossings.size() == 2);

  // the new kink has a +1 lobe, so R1- (which wants a negative lobe) fails
  auto minus_templates = applicable_moves(kinked);
  CHECK_FALSE(find_template(minus_templates, MoveKind::R1Minus));
}

TEST_CASE("R1+ with a negative-compatible balance and matching removal") {
  // 8-: both lobes all-negative, so any valid R1+ must shrink them
  Diagram d = build_eight(-1, 4);
  auto templates = applicable_moves(d);
  bool round_tripped = false;
  for (const MoveInstance& t : templates) {
    if (t.kind != MoveKind::R1Plus) continue;
    for (const MoveInstance& inst : {t}) {
      MoveInstance attempt = inst;
      attempt.delta = 1;
      // try shrinking both lobes to absorb the kink area
      for (auto e0 : {Rational(-1), Rational(-2), Rational(-1, 2)}) {
        for (auto e1 : {Rational(-1), Rational(-2), Rational(-1, 2)}) {
          attempt.epsilons = {{0, e0}, {1, e1}};
          try {
            Diagram kinked = apply_move(d, attempt);
            check_postconditions(d, kinked);
            round_tripped = true;
          } catch (const MoveError&) {
          }
          if (round_tripped) break;
        }
        if (round_tripped) break;
      }
      if (round_tripped) break;
    }
    if (round_tripped) break;
  }
  CHECK(round_tripped);
}

TEST_CASE("R1- removes a negative kink and fuses the strand") {
  // make a kinked eight, then flip the kink sign by hand so R1- applies
  Diagram d = build_eight(+1, 1);
  MoveInstance plus;
  plus.kind = MoveKind::R1Plus;
  plus.arc = 0;
  plus.side = +1;
  plus.delta = Rational(1, 4);
  plus.epsilons = {{0, Rational(1, 4)}, {1, Rational(3, 4)}};
  Diagram kinked = apply_move(d, plus);
  int kink_crossing = -1;
  for (Crossing& c : kinked.crossings)
    if (c.id != d.crossings[0].id) {
      c.sign0 = -c.sign0;
      kink_crossing = c.id;
    }
  REQUIRE(validate(kinked).ok());

  auto templates = applicable_moves(kinked);
  const MoveInstance* minus = find_template(templates, MoveKind::R1Minus);
  REQUIRE(minus);
  CHECK(minus->crossing == kink_crossing);
  // the dying lobe wound at +2 inside lobe 0: compensate with the lobes,
  // which must still strictly grow
  MoveInstance inst = *minus;
  bool removed = false;
  std::vector<Rational> c = {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(5, 8),
                             Rational(3, 4)};
  for (const Rational& e0 : c) {
    for (const Rational& e1 : c) {
      inst.epsilons = {{0, e0}, {1, e1}};
      try {
        Diagram out = apply_move(kinked, inst);
        check_postconditions(kinked, out);
        CHECK(out.crossings.size() == 1);
        CHECK(out.arcs.size() == 2);
        CHECK(canonical_shape(out).form == canonical_shape(d).form);
        removed = true;
      } catch (const MoveError&) {
      }
      if (removed) break;
    }
    if (removed) break;
  }
  CHECK(removed);
}

TEST_CASE("R1- on a kinked unknot leaves a circle") {
  Diagram d = build_unknot(2);
  MoveInstance plus;
  plus.kind = MoveKind::R1Plus;
  plus.side = +1;
  plus.delta = Rational(1, 4);
  // no arcs exist on a bare circle, so R1+ has no site: check the template list
  CHECK_FALSE(find_template(applicable_moves(d), MoveKind::R1Plus));

  // an exact eight cannot lose a kink (the leftover circle would need a
  // zero-area inside), but an unbalanced one can
  Diagram exact_eight = build_eight(-1, 1);
  for (const MoveInstance& m : applicable_moves(exact_eight)) {
    if (m.kind != MoveKind::R1Minus) continue;
    MoveInstance inst = m;
    bool removed = false;
    std::vector<Rational> c = {Rational(-1, 2), Rational(1, 2), Rational(1), Rational(-1)};
    for (int other : {0, 1})
      for (const Rational& e : c) {
        inst.epsilons = {{other, e}};
        try {
          apply_move(exact_eight, inst);
          removed = true;
        } catch (const MoveError&) {
        }
      }
    CHECK_FALSE(removed);
  }

  Diagram lopsided = build_eight(-1, 2);
  for (Face& f : lopsided.faces)
    if (f.id == 0) f.area = 1;  // lobes 1 and 2, total signed area -1
  lopsided.layout.reset();
  REQUIRE(validate(lopsided).ok());
  MoveInstance inst;
  inst.kind = MoveKind::R1Minus;
  inst.crossing = 0;
  inst.face = 0;  // remove the positive-winding lobe of area 1
  inst.epsilons = {{1, Rational(-1)}};
  Diagram out = apply_move(lopsided, inst);
  check_postconditions(lopsided, out);
  CHECK(out.crossings.empty());
  CHECK(out.circles.size() == 1);
  CHECK_FALSE(out.circles[0].positive);
}

TEST_CASE("birth drops an exact positive eight into a face") {
  Diagram d = build_unknot(4);
  MoveInstance birth;
  birth.kind = MoveKind::Birth;
  birth.face = 0;  // inside the circle
  birth.delta = 1;
  birth.epsilons = {{0, -2}};
  Diagram with8 = apply_move(d, birth);
  check_postconditions(d, with8);
  CHECK(with8.components.size() == 2);
  CHECK(with8.crossings.size() == 1);
  CHECK(with8.faces.size() == 4);

  // the newborn lobes carry positive signs
  Index ix(with8);
  const Crossing& q = with8.crossings[0];
  CHECK(q.sign0 == -1);
  CHECK(ix.quadrant_sign(q.id, 1) == 1);

  SUBCASE("death undoes a negative eight only") {
    auto templates = applicable_moves(with8);
    CHECK_FALSE(find_template(templates, MoveKind::Death));  // lobes are positive
  }
  SUBCASE("birth into the outer face balances itself") {
    MoveInstance outer_birth;
    outer_birth.kind = MoveKind::Birth;
    outer_birth.face = d.outer_face;
    outer_birth.delta = 2;
    Diagram out = apply_move(d, outer_birth);
    check_postconditions(d, out);
  }
}

TEST_CASE("death removes a standalone exact negative eight") {
  // birth an 8+ next to an 8-(2) (whose negative lobes must shrink), then
  // flip the newborn sign by hand to get a standalone 8- and kill it
  Diagram base = build_eight(-1, 2);
  MoveInstance birth;
  birth.kind = MoveKind::Birth;
  birth.face = base.outer_face;
  birth.delta = 1;
  birth.epsilons = {{0, Rational(-1, 2)}, {1, Rational(-1, 2)}};
  Diagram two = apply_move(base, birth);
  check_postconditions(base, two);
  // flipping a component's signs is test scaffolding, not a move
  Diagram flipped = two;
  for (Crossing& c : flipped.crossings)
    if (c.id != base.crossings[0].id) c.sign0 = -c.sign0;
  REQUIRE(validate(flipped).ok());

  // both the base eight and the newborn are standalone death sites; target
  // the newborn crossing
  const MoveInstance* death = nullptr;
  auto templates = applicable_moves(flipped);
  for (const MoveInstance& m : templates)
    if (m.kind == MoveKind::Death && m.crossing != base.crossings[0].id) death = &m;
  REQUIRE(death);
  MoveInstance inst = *death;
  inst.epsilons = {{0, Rational(-1, 2)}, {1, Rational(-1, 2)}};
  Diagram gone = apply_move(flipped, inst);
  check_postconditions(flipped, gone);
  CHECK(are_equivalent(gone, build_eight(-1, 1)));
}

TEST_CASE("R2 insertion and removal round-trip on a chain lens") {
  // E+ has a mixed-sign lens (corners -, +): removable by R2 only if the
  // areas balance; insert first on an eight to create such a bigon.
  Diagram d = build_eight(+1, 2);
  Index ix(d);
  // both lobes' arcs see the outer face; use the two loop arcs across a lobe
  MoveInstance ins;
  ins.kind = MoveKind::R2Insert;
  ins.arc = 0;
  ins.arc2 = 1;
  ins.face = -1;
  // find a common bounded face of arcs 0 and 1: none for the eight (they
  // only share the outer face), so expect the site to be rejected
  ins.delta = ins.split_first = ins.split_second = Rational(1, 8);
  bool rejected = false;
  try {
    for (int f : {0, 1}) {
      ins.face = f;
      apply_move(d, ins);
    }
  } catch (const MoveError&) {
    rejected = true;
  }
  CHECK(rejected);

  // a chain lens face is bounded by two distinct arcs: push them together.
  // Faces of C-++(4,3,2): lobe 0 all-negative, lens 1 mixed (the site),
  // lobes 2 and 3 all-positive; windings +1,-1,+1,-1.
  Diagram chain = build({Family::Chain, {-1, +1, +1}, {4, 3, 2}});
  auto templates = applicable_moves(chain);
  bool inserted = false;
  for (const MoveInstance& t : templates) {
    if (t.kind != MoveKind::R2Insert || t.face != 1) continue;
    MoveInstance attempt = t;
    attempt.delta = Rational(1, 4);
    attempt.split_first = Rational(11, 8);
    attempt.split_second = Rational(11, 8);  // pieces sum to 3 - 1/4
    // conditions force lobe 0 to shrink and lobes 2, 3 to grow; balance the
    // leftover against either sign of the new bigon's winding
    for (auto eps : {std::map<int, Rational>{{0, Rational(-1, 4)}, {2, Rational(1, 2)}, {3, Rational(1, 4)}},
                     std::map<int, Rational>{{0, Rational(-1, 4)}, {2, Rational(1, 2)}, {3, Rational(3, 4)}}}) {
      attempt.epsilons = eps;
      try {
        Diagram out = apply_move(chain, attempt);
        check_postconditions(chain, out);
        CHECK(out.crossings.size() == 5);
        inserted = true;
      } catch (const MoveError&) {
      }
      if (inserted) break;
    }
    if (inserted) break;
  }
  CHECK(inserted);
}

TEST_CASE("R3 flips a mixed triangle and preserves the invariants") {
  // the trefoil center triangle is sign-pure; flip one crossing's sign to
  // make a mixed, height-consistent triangle (a legitimate diagram)
  Diagram t = build_trefoil(-1, {2, 2, 2}, 1);
  t.crossings[0].sign0 = +1;
  t.layout.reset();
  REQUIRE(validate(t).ok());
  auto templates = applicable_moves(t);
  const MoveInstance* r3 = find_template(templates, MoveKind::R3);
  REQUIRE(r3);
  CHECK(r3->face == 3);  // the center
  // the flip pushes the triangle into former outer territory: the ex-petals
  // come out winding +1 and the new triangle -1, so the all-positive petal 2
  // absorbs the area difference
  MoveInstance inst = *r3;
  inst.epsilons = {{2, Rational(3)}};
  Diagram flipped = apply_move(t, inst);
  check_postconditions(t, flipped);
  CHECK(writhe(flipped) == writhe(t));
  CHECK(flipped.faces.size() == t.faces.size());
  CHECK(flipped.crossings.size() == 3);
  // the triangle face survives with the same area
  Index fix(flipped);
  CHECK(*fix.face(3).area == 1);
}

TEST_CASE("saddle splits the lens of a chain into two components") {
  // pinching lens 1 of C-++(4,3,2) cuts the chain in two; the surviving
  // sign-pure lobes still need their strict epsilons
  Diagram chain = build({Family::Chain, {-1, +1, +1}, {4, 3, 2}});
  auto templates = applicable_moves(chain);
  bool saddled = false;
  for (const MoveInstance& t : templates) {
    if (t.kind != MoveKind::H2 || t.face != 1) continue;
    MoveInstance attempt = t;
    attempt.split_first = Rational(3, 2);
    attempt.split_second = Rational(3, 2);
    attempt.epsilons = {{0, Rational(-1, 4)}, {2, Rational(1, 2)}, {3, Rational(1, 4)}};
    try {
      Diagram out = apply_move(chain, attempt);
      check_postconditions(chain, out);
      CHECK(out.components.size() == 2);
      saddled = true;
      break;
    } catch (const MoveError& e) {
      INFO(e.what());
    }
  }
  CHECK(saddled);
}

TEST_CASE("R0 keeps the combinatorial type") {
  Diagram d = build_eight(-1, 2);
  Diagram moved = apply_move(d, r0({{0, Rational(-1, 2)}, {1, Rational(-1, 2)}}));
  CHECK(canonical_shape(moved).form == canonical_shape(d).form);
  CHECK(canonical_form(moved) != canonical_form(d));
}

TEST_CASE("search composes a kink with a closing redistribution") {
  Diagram d = build_eight(+1, 1);
  MoveInstance plus;
  plus.kind = MoveKind::R1Plus;
  plus.arc = 0;
  plus.side = +1;
  plus.delta = Rational(1, 4);
  plus.epsilons = {{0, Rational(1, 4)}, {1, Rational(3, 4)}};
  Diagram kinked = apply_move(d, plus);
  SearchResult res = search_undercut(d, kinked, 2, 30000);
  REQUIRE(res.outcome == SearchOutcome::Found);
  CHECK(res.trace->depth() == 2);
  CHECK(res.trace->steps[0].kind == MoveKind::R1Plus);
  CHECK(res.trace->steps[1].kind == MoveKind::R0);
  CHECK(canonical_form(replay(d, res.trace->steps)) == canonical_form(kinked));
}

TEST_CASE("search finds a birth inside a shrinking lobe") {
  Diagram base = build_eight(-1, 2);
  MoveInstance birth;
  birth.kind = MoveKind::Birth;
  birth.face = 0;
  birth.delta = Rational(1, 4);
  birth.epsilons = {{0, Rational(-1)}, {1, Rational(-1, 2)}};
  Diagram two = apply_move(base, birth);
  SearchResult res = search_undercut(base, two, 2, 30000);
  REQUIRE(res.outcome == SearchOutcome::Found);
  CHECK(canonical_form(replay(base, res.trace->steps)) == canonical_form(two));
}

TEST_CASE("search finds a structural birth step") {
  Diagram from = build_unknot(4);
  MoveInstance birth;
  birth.kind = MoveKind::Birth;
  birth.face = 0;
  birth.delta = 1;
  birth.epsilons = {{0, -2}};
  Diagram to = apply_move(from, birth);
  SearchResult res = search_undercut(from, to, 2, 5000);
  REQUIRE(res.outcome == SearchOutcome::Found);
  CHECK(res.trace->depth() >= 1);
  CHECK(canonical_form(replay(from, res.trace->steps)) == canonical_form(to));
}

TEST_CASE("search: identity needs no moves") {
  Diagram d = build_eight(+1, 1);
  SearchResult res = search_undercut(d, d, 0);
  REQUIRE(res.outcome == SearchOutcome::Found);
  CHECK(res.trace->depth() == 0);
}

TEST_CASE("search: growing the positive eight is one R0 step") {
  SearchResult res = search_undercut(build_eight(+1, 1), build_eight(+1, 2), 3);
  REQUIRE(res.outcome == SearchOutcome::Found);
  REQUIRE(res.trace->depth() == 1);
  CHECK(res.trace->steps[0].kind == MoveKind::R0);
  for (const auto& [face, e] : res.trace->steps[0].epsilons) CHECK(e == 1);
  // replay reproduces the goal exactly
  Diagram replayed = replay(build_eight(+1, 1), res.trace->steps);
  CHECK(canonical_form(replayed) == canonical_form(build_eight(+1, 2)));
}

TEST_CASE("search: shrinking the negative eight is one R0 step") {
  SearchResult res = search_undercut(build_eight(-1, 2), build_eight(-1, 1), 3);
  REQUIRE(res.outcome == SearchOutcome::Found);
  REQUIRE(res.trace->depth() == 1);
  CHECK(res.trace->steps[0].kind == MoveKind::R0);
  for (const auto& [face, e] : res.trace->steps[0].epsilons) CHECK(e == -1);
}

TEST_CASE("search respects the obstruction direction") {
  // 8+(2) -> 8+(1) would need both positive lobes to shrink: no R0, and the
  // obstruction engine says OBSTRUCTED, so nothing should be found
  SearchResult res = search_undercut(build_eight(+1, 2), build_eight(+1, 1), 2, 2000);
  CHECK(res.outcome != SearchOutcome::Found);
}

TEST_CASE("trace serialization round-trips and replays") {
  SearchResult res = search_undercut(build_eight(-1, 2), build_eight(-1, 1), 3);
  REQUIRE(res.outcome == SearchOutcome::Found);
  std::string js = trace_to_json(*res.trace);
  auto steps = steps_from_json(js);
  Diagram end = replay(build_eight(-1, 2), steps);
  CHECK(canonical_form(end).bytes == res.trace->end.bytes);
}

TEST_CASE("golden move fixtures") {
  namespace fs = std::filesystem;
  // Regenerate with: ekd build ... | apply in tests/make_fixtures (see repo
  // docs); here we check recorded before/after canonical pairs.
  fs::path dir = fs::path(FIXTURE_DIR);
  REQUIRE(fs::exists(dir / "birth_before.json"));
  Diagram before = load_file((dir / "birth_before.json").string());
  Diagram after = load_file((dir / "birth_after.json").string());
  MoveInstance birth;
  birth.kind = MoveKind::Birth;
  birth.face = before.outer_face;
  birth.delta = 2;
  birth.epsilons = {{0, Rational(-1, 4)}, {1, Rational(-1, 4)}};
  CHECK(are_equivalent(apply_move(before, birth), after));
}
