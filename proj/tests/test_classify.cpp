#include "doctest.h"

#include "augtree/json_io.hpp"
#include "augtree/errors.hpp"
#include "test_support.hpp"

using namespace augtree;
using testsup::find_component;
using testsup::load_spec;
using testsup::make_word;
using testsup::mat;
using testsup::rat;

namespace {

Snapshot quotient_snapshot(const char* name, int depth) {
  Snapshot raw = build_snapshot(load_spec(name), depth);
  return build_quotient(raw);
}

}  // namespace

TEST_CASE("conjugacy certificates") {
  Snapshot q = quotient_snapshot("example28.json", 4);
  // {1,2,3} at level 1 vs {11,12,13} at level 2: conjugator x/4
  const int cA = find_component(q, 1, "1");
  const int cB = find_component(q, 2, "11");
  auto cert = conjugacy_equivalent(q, q.levels[1].comps[cA], q.levels[2].comps[cB], 2);
  REQUIRE(cert.has_value());
  CHECK(cert->h.scale() == rat("1/4"));
  CHECK(cert->h.translate1() == Rational(0));
  CHECK_FALSE(cert->h.reflect());
  CHECK(cert->pairing.size() == 3);

  // a component is equivalent to itself through the identity
  auto self = conjugacy_equivalent(q, q.levels[1].comps[cA], q.levels[1].comps[cA], 2);
  REQUIRE(self.has_value());
  CHECK(self->h.scale() == Rational(1));
  CHECK(self->h.translate1() == Rational(0));

  // size mismatch refutes immediately
  const int cC = find_component(q, 2, "24");  // the four-element component
  CHECK(q.levels[2].comps[cC].size() == 4);
  CHECK_FALSE(conjugacy_equivalent(q, q.levels[2].comps[cC], q.levels[1].comps[cA], 2));
}

TEST_CASE("classification of the overlapping quotient") {
  Snapshot q = quotient_snapshot("example28.json", 6);
  ClassTable t = classify(q, 3);
  REQUIRE(t.simple());
  CHECK(t.comp_classes.size() == 3);
  CHECK(t.vert_classes.size() == 2);
  CHECK(mat_equal(t.A, mat({{1, 1, 0}, {1, 2, 1}, {1, 2, 2}})));
  CHECK(mat_equal(t.B, mat({{3, 1}, {2, 1}})));
  const auto u = t.u_blocks();
  CHECK(u[0] == std::vector<BigInt>{1, 0});
  CHECK(u[1] == std::vector<BigInt>{2, 1});
  CHECK(u[2] == std::vector<BigInt>{3, 1});
  // classes were all discovered within the first three levels
  CHECK(t.last_new_class_level <= 2);
}

TEST_CASE("classification of the unequal-ratio system") {
  Snapshot snap = build_snapshot(load_spec("example44.json"), 5);
  ClassTable t = classify(snap, 3);
  REQUIRE(t.simple());
  CHECK(t.comp_classes.size() == 5);
  CHECK(t.vert_classes.size() == 2);
  CHECK(mat_equal(t.A, mat({{1, 1, 1, 0, 0},
                            {1, 1, 2, 1, 0},
                            {1, 0, 1, 0, 1},
                            {1, 1, 3, 2, 0},
                            {1, 1, 1, 0, 2}})));
  CHECK(mat_equal(t.B, mat({{3, 2}, {1, 2}})));
  const auto u = t.u_blocks();
  CHECK(u[0] == std::vector<BigInt>{1, 0});
  CHECK(u[1] == std::vector<BigInt>{2, 0});
  CHECK(u[2] == std::vector<BigInt>{0, 2});
  CHECK(u[3] == std::vector<BigInt>{3, 0});
  CHECK(u[4] == std::vector<BigInt>{1, 2});
}

TEST_CASE("classification of a separated system") {
  Snapshot snap = build_snapshot(load_spec("cantor.json"), 5);
  ClassTable t = classify(snap, 3);
  REQUIRE(t.simple());
  CHECK(t.comp_classes.size() == 1);
  CHECK(t.vert_classes.size() == 1);
  CHECK(mat_equal(t.A, mat({{2}})));
  CHECK(mat_equal(t.B, mat({{2}})));
  CHECK(t.u_blocks()[0] == std::vector<BigInt>{1});
}

TEST_CASE("the interval system classifies but stays connected") {
  Snapshot snap = build_snapshot(load_spec("interval.json"), 5);
  ClassTable t = classify(snap, 3);
  // one vertex class, component classes stabilize only if component sizes
  // repeat; here every level is one growing component so classes keep
  // appearing and the table must say so
  CHECK_FALSE(t.simple());
}

TEST_CASE("necessary identity holds on simple tables") {
  Snapshot q = quotient_snapshot("example28.json", 6);
  ClassTable t = classify(q, 3);
  REQUIRE(t.simple());
  CHECK(necessary_check(t.A, t.B, t.u_blocks()));

  Snapshot s44 = build_snapshot(load_spec("example44.json"), 5);
  ClassTable t44 = classify(s44, 3);
  REQUIRE(t44.simple());
  CHECK(necessary_check(t44.A, t44.B, t44.u_blocks()));
}

TEST_CASE("classification is deterministic") {
  Snapshot q1 = quotient_snapshot("example28.json", 5);
  Snapshot q2 = quotient_snapshot("example28.json", 5);
  ClassTable t1 = classify(q1, 3);
  ClassTable t2 = classify(q2, 3);
  CHECK(class_table_json(q1, t1).dump() == class_table_json(q2, t2).dump());
}

TEST_CASE("tree isomorphism by shared B") {
  Snapshot qa = quotient_snapshot("example28.json", 5);
  Snapshot qb = quotient_snapshot("k2.json", 5);
  ClassTable ta = classify(qa, 3);
  ClassTable tb = classify(qb, 3);
  REQUIRE(ta.simple());
  REQUIRE(tb.simple());
  CHECK(mat_equal(ta.B, tb.B));
  auto plan = tree_isomorphism_by_B(ta, tb, 6);
  REQUIRE(plan.has_value());
  // level-k class counts follow B^k from the root class
  CHECK(plan->level_counts[0] == std::vector<BigInt>{1, 0});
  CHECK(plan->level_counts[1] == std::vector<BigInt>{3, 1});
  CHECK(plan->level_counts[2] == std::vector<BigInt>{11, 4});

  auto self = tree_isomorphism_by_B(ta, ta, 4);
  CHECK(self.has_value());

  Snapshot cantor = build_snapshot(load_spec("cantor.json"), 5);
  ClassTable tc = classify(cantor, 3);
  CHECK_FALSE(tree_isomorphism_by_B(tc, ta, 4).has_value());  // dimension mismatch
}

TEST_CASE("K2 classification carries the root class plus four more") {
  Snapshot q = quotient_snapshot("k2.json", 6);
  ClassTable t = classify(q, 3);
  REQUIRE(t.simple());
  CHECK(t.comp_classes.size() == 5);
  CHECK(mat_equal(t.B, mat({{3, 1}, {2, 1}})));
  const auto u = t.u_blocks();
  CHECK(u[0] == std::vector<BigInt>{1, 0});  // root
  // the four remaining classes carry the published profiles
  std::vector<std::vector<BigInt>> rest(u.begin() + 1, u.end());
  std::sort(rest.begin(), rest.end());
  std::vector<std::vector<BigInt>> want = {{1, 1}, {2, 0}, {2, 1}, {3, 1}};
  std::sort(want.begin(), want.end());
  CHECK(rest == want);
  CHECK(necessary_check(t.A, t.B, t.u_blocks()));
}

TEST_CASE("K15/8 classification matches the published two-class table") {
  Snapshot q = quotient_snapshot("k15_8.json", 6);
  ClassTable t = classify(q, 3);
  REQUIRE(t.simple());
  CHECK(t.comp_classes.size() == 2);
  CHECK(mat_equal(t.A, mat({{2, 1}, {3, 2}})));
  CHECK(mat_equal(t.B, mat({{3, 1}, {2, 1}})));
  const auto u = t.u_blocks();
  CHECK(u[0] == std::vector<BigInt>{1, 0});
  CHECK(u[1] == std::vector<BigInt>{1, 1});
}

TEST_CASE("certificate replay matches offspring class multisets") {
  // for every class representative pair (rep, other member), the offspring
  // class multisets agree one and two levels down
  Snapshot q = quotient_snapshot("example28.json", 5);
  ClassTable t = classify(q, 3);
  REQUIRE(t.simple());
  for (int n = 0; n + 1 <= q.max_level; ++n)
    for (const auto& comp : q.levels[n].comps) {
      const auto& rep = t.comp_classes[comp.cls];
      std::vector<int> mine, reps;
      for (int z : offspring_components(q, comp)) mine.push_back(q.levels[n + 1].comps[z].cls);
      if (rep.level + 1 > q.max_level) continue;
      for (int z : offspring_components(q, q.levels[rep.level].comps[rep.comp]))
        reps.push_back(q.levels[rep.level + 1].comps[z].cls);
      std::sort(mine.begin(), mine.end());
      std::sort(reps.begin(), reps.end());
      CHECK(mine == reps);
    }
}
