#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>
#include <set>

#include "ekd/disks.hpp"
#include "ekd/families.hpp"
#include "ekd/invariants.hpp"
#include "ekd/moves.hpp"
#include "support.hpp"

using namespace ekd;

namespace {

// Independent oracle: every nonempty face subset, filtered by shared-edge
// connectivity, Euler characteristic one, and the local boundary patterns.
std::set<std::set<int>> oracle_disks(const Diagram& d) {
  Index ix(d);
  std::vector<int> bounded;
  for (const Face& f : d.faces)
    if (f.area) bounded.push_back(f.id);

  std::set<std::set<int>> out;
  REQUIRE(bounded.size() <= 12);
  for (unsigned mask = 1; mask < (1u << bounded.size()); ++mask) {
    std::set<int> subset;
    for (std::size_t i = 0; i < bounded.size(); ++i)
      if (mask & (1u << i)) subset.insert(bounded[i]);
    auto in = [&](int f) { return subset.count(f) != 0; };

    // connectivity over shared arcs/circles
    std::map<int, int> root;
    for (int f : subset) root[f] = f;
    std::function<int(int)> find = [&](int x) {
      return root[x] == x ? x : root[x] = find(root[x]);
    };
    for (const Arc& a : d.arcs) {
      int l = ix.face_of_dart(a.tail), r = ix.face_of_dart(a.head);
      if (in(l) && in(r)) root[find(l)] = find(r);
    }
    for (const Circle& c : d.circles)
      if (in(c.inside_face) && in(c.outside_face))
        root[find(c.inside_face)] = find(c.outside_face);
    std::set<int> roots;
    for (int f : subset) roots.insert(find(f));
    if (roots.size() != 1) continue;

    // local quadrant patterns
    bool immersed = true;
    int vertices = 0;
    for (const Crossing& c : d.crossings) {
      int m = 0;
      for (int k = 0; k < 4; ++k)
        if (in(ix.face_of_dart(c.darts[k]))) m |= 1 << k;
      if (m) vertices++;
      if (m == 0b0101 || m == 0b1010) immersed = false;
    }
    if (!immersed) continue;

    // Euler characteristic of the closed region
    int edges = 0;
    for (const Arc& a : d.arcs)
      if (in(ix.face_of_dart(a.tail)) || in(ix.face_of_dart(a.head))) edges++;
    long chi = vertices - edges;
    for (int f : subset) {
      int cycles = static_cast<int>(ix.face(f).cycles.size());
      for (const Circle& c : d.circles)
        if (c.inside_face == f || c.outside_face == f) cycles++;
      chi += 2 - cycles;
    }
    if (chi != 1) continue;
    out.insert(subset);
  }
  return out;
}

std::set<std::set<int>> as_sets(const std::vector<BoundDisk>& disks) {
  std::set<std::set<int>> out;
  for (const BoundDisk& d : disks) out.insert(d.faces);
  return out;
}

}  // namespace

TEST_CASE("enumeration equals the brute-force subset oracle") {
  std::mt19937 rng(17);
  for (auto& [name, d] : corpus()) {
    INFO(name);
    CHECK(as_sets(enumerate_disks(d)) == oracle_disks(d));
  }
  for (int i = 0; i < 40; ++i) {
    Diagram d = ekd::test::random_diagram(rng);
    CHECK(as_sets(enumerate_disks(d)) == oracle_disks(d));
  }
}

TEST_CASE("unknot binds exactly the single cornerless disk") {
  auto disks = enumerate_disks(build_unknot(1));
  REQUIRE(disks.size() == 1);
  CHECK(disks[0].corners.empty());
  CHECK(disks[0].aligned);
  CHECK(disks[0].all_convex);
  CHECK(disks[0].area == 1);
  CHECK(disks[0].boundary_circle.has_value());
}

TEST_CASE("figure eight binds its two lobes and rejects their union") {
  Diagram d = build_eight(+1, 1);
  auto disks = enumerate_disks(d);
  REQUIRE(disks.size() == 2);
  for (const BoundDisk& disk : disks) {
    CHECK(disk.corners.size() == 1);
    CHECK(disk.corners[0].convex);
    CHECK(disk.corners[0].sign == +1);
    CHECK(disk.aligned);
  }
}

TEST_CASE("trefoil disk census") {
  Diagram t = build_trefoil(-1, {3, 3, 3}, 1);
  auto disks = enumerate_disks(t);
  // 3 petals, the center, 3 petal+center unions, 3 double-petal+center
  // unions, and everything: 11 disks in the multiplicity-one regime.
  CHECK(disks.size() == 11);
  int petals = 0, centers = 0, concave = 0;
  for (const BoundDisk& disk : disks) {
    if (disk.faces.size() == 1 && disk.corners.size() == 2) petals++;
    if (disk.faces.size() == 1 && disk.corners.size() == 3) {
      centers++;
      CHECK(disk.aligned);
      for (const CornerIncidence& c : disk.corners) CHECK(c.sign == -1);
    }
    if (!disk.all_convex) concave++;
  }
  CHECK(petals == 3);
  CHECK(centers == 1);
  CHECK(concave == 4);  // the double-petal unions and the full union
  // petals are lunes: both boundary arcs run the same way, so not aligned
  for (const BoundDisk& disk : disks)
    if (disk.faces.size() == 1 && disk.corners.size() == 2) CHECK_FALSE(disk.aligned);
}

TEST_CASE("maslov table: horizontal disk dimensions") {
  for (int n : {1, 2, 3, 5}) {
    std::vector<int> allpos(n, +1), allneg(n, -1);
    CHECK(*maslov_table_sum(allpos, Side::Upper) == 0);
    CHECK(*maslov_table_sum(allneg, Side::Lower) == 0);
    CHECK(*maslov_table_sum(allneg, Side::Upper) == -n);
    CHECK(*maslov_table_sum(allpos, Side::Lower) == -n);
  }
  // the (+,-) bigon on the upper side: -3/4 + -1/4 = -1
  CHECK(*maslov_table_sum({+1, -1}, Side::Upper) == -1);
  CHECK(*maslov_table_sum({}, Side::Upper) == 0);
}

TEST_CASE("maslov table sums are integers with the lemma's iff") {
  std::mt19937 rng(23);
  for (int i = 0; i < 500; ++i) {
    int n = std::uniform_int_distribution<int>(1, 9)(rng);
    std::vector<int> signs;
    int negatives = 0;
    for (int k = 0; k < n; ++k) {
      signs.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1);
      if (signs.back() < 0) negatives++;
    }
    for (Side side : {Side::Upper, Side::Lower}) {
      Rational sum = *maslov_table_sum(signs, side);
      CHECK(denominator(sum) == 1);
      bool pure = side == Side::Upper ? negatives == 0 : negatives == n;
      CHECK((sum == 0) == pure);  // dim M(u) = 1 iff the right sign purity
    }
  }
}

TEST_CASE("disk analysis wires the table to enumerated disks") {
  Diagram d = build_eight(-1, 2);
  auto disks = enumerate_disks(d);
  REQUIRE(disks.size() == 2);
  DiskAnalysis lower = disk_analysis(d, disks[0], Side::Lower);
  CHECK(lower.maslov_normal == 0);
  CHECK(lower.expected_dim == 1);
  DiskAnalysis upper = disk_analysis(d, disks[0], Side::Upper);
  CHECK(upper.maslov_normal == -1);
  CHECK(upper.expected_dim == 0);
}

TEST_CASE("big disks of the eight pairs") {
  DiagramPair minus{build_eight(-1, 1), build_eight(-1, 2)};
  auto bigs = big_disks(minus);
  REQUIRE(bigs.size() == 2);  // both lower lobes
  for (const BoundDisk& b : bigs) {
    CHECK(b.side == Side::Lower);
    CHECK(b.area == 1);
  }
  DiagramPair plus{build_eight(+1, 1), build_eight(+1, 2)};
  auto bigs_plus = big_disks(plus);
  REQUIRE(bigs_plus.size() == 2);  // both upper lobes
  for (const BoundDisk& b : bigs_plus) CHECK(b.side == Side::Upper);
}

TEST_CASE("little disks of the 8- pair relative to a lower lobe") {
  DiagramPair pair{build_eight(-1, 1), build_eight(-1, 2)};
  auto bigs = big_disks(pair);
  REQUIRE(!bigs.empty());
  auto littles = little_disks(pair, bigs[0]);
  // the other lower lobe (case b) and both upper lobes (case d)
  CHECK(littles.size() == 3);
  int lower = 0, upper = 0;
  for (const BoundDisk& l : littles) (l.side == Side::Lower ? lower : upper)++;
  CHECK(lower == 1);
  CHECK(upper == 2);
}

TEST_CASE("trefoil pair: center is the big disk, lone petals are not") {
  auto tre = [](const Rational& x) {
    Rational lobe = (Rational(15) - 2 * x) / 3;
    return build_trefoil(-1, {lobe, lobe, lobe}, x);
  };
  DiagramPair pair{tre(1), tre(2)};
  auto bigs = big_disks(pair);
  bool center_found = false;
  for (const BoundDisk& b : bigs) {
    CHECK(b.side == Side::Lower);
    if (b.faces == std::set<int>{3}) {
      center_found = true;
      CHECK(b.area == 1);
      CHECK(b.corners.size() == 3);
    }
    CHECK(b.faces != std::set<int>{0});
  }
  CHECK(center_found);
  for (const BoundDisk& b : bigs)
    if (b.faces == std::set<int>{3}) {
      auto littles = little_disks(pair, b);
      bool upper_center = false;
      for (const BoundDisk& l : littles)
        if (l.side == Side::Upper && l.faces == std::set<int>{3}) upper_center = true;
      CHECK(upper_center);
    }
}

TEST_CASE("unknot pair: zero-corner disks are big and little") {
  DiagramPair pair{build_unknot(1), build_unknot(2)};
  auto bigs = big_disks(pair);
  REQUIRE(bigs.size() == 1);  // the lower face (area 1 <= a(lower) = 1)
  CHECK(bigs[0].side == Side::Lower);
  auto littles = little_disks(pair, bigs[0]);
  REQUIRE(littles.size() == 1);
  CHECK(littles[0].side == Side::Upper);
  CHECK(little_disk_case(bigs[0], littles[0]) == 'd');
}

TEST_CASE("corner sharing") {
  DiagramPair pair{build_eight(-1, 1), build_eight(-1, 1)};
  auto lower = enumerate_disks(pair.lower, {}, Side::Lower);
  REQUIRE(lower.size() == 2);
  CHECK(shares_all_corners(lower[0], lower[0]));
  // opposite quadrants carry the same sign, so the two lobes share the corner
  CHECK(shares_all_corners(lower[0], lower[1]));
  auto upper = enumerate_disks(pair.upper, {}, Side::Upper);
  CHECK_FALSE(shares_all_corners(lower[0], upper[0]));  // different sides
  // zero-corner disks share vacuously even across sides
  auto ld = enumerate_disks(build_unknot(1), {}, Side::Lower);
  auto ud = enumerate_disks(build_unknot(1), {}, Side::Upper);
  CHECK(shares_all_corners(ld[0], ud[0]));
}

TEST_CASE("enumeration options filter") {
  Diagram t = build_trefoil(-1, {3, 3, 3}, 1);
  EnumerateOptions convex;
  convex.require_convex = true;
  CHECK(enumerate_disks(t, convex).size() == 7);
  EnumerateOptions few;
  few.max_corners = 1;
  for (const BoundDisk& d : enumerate_disks(t, few)) CHECK(d.corners.size() <= 1);
}

TEST_CASE("sign coherence and area additivity across random diagrams") {
  std::mt19937 rng(29);
  for (int i = 0; i < 60; ++i) {
    Diagram d = ekd::test::random_diagram(rng);
    Index ix(d);
    for (const BoundDisk& disk : enumerate_disks(d)) {
      for (const CornerIncidence& c : disk.corners)
        CHECK(c.sign == ix.quadrant_sign(c.crossing, c.quadrant));
      Rational total = 0;
      for (int f : disk.faces) total += *ix.face(f).area;
      CHECK(disk.area == total);
      if (disk.all_convex) {
        DiskAnalysis an = disk_analysis(d, disk, Side::Upper);
        REQUIRE(an.maslov_normal.has_value());
        bool allpos = true;
        for (int s : an.corner_signs) allpos = allpos && s > 0;
        CHECK((*an.maslov_normal == 0) == allpos);
      }
    }
  }
}

TEST_CASE("disks of a disconnected diagram match the oracle") {
  Diagram base = build_eight(-1, 2);
  MoveInstance birth;
  birth.kind = MoveKind::Birth;
  birth.face = 0;  // drop the newborn inside a lobe
  birth.delta = Rational(1, 4);
  birth.epsilons = {{0, Rational(-1)}, {1, Rational(-1, 2)}};
  Diagram two = apply_move(base, birth);
  REQUIRE(validate(two).ok());
  CHECK(as_sets(enumerate_disks(two)) == oracle_disks(two));
}
