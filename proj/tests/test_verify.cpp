#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "relrep/verify.hpp"
#include "test_helpers.hpp"

using namespace relrep;

namespace {

Coloring make_coloring(const FiniteGroup& g, std::vector<std::string> names,
                       std::vector<std::vector<int>> classes) {
  for (auto& cl : classes) std::sort(cl.begin(), cl.end());
  return Coloring{g, std::move(names), std::move(classes)};
}

// Move one element to another class; drops it from wherever it was.
Coloring move_element(const Coloring& c, int element, int to_class) {
  Coloring out = c;
  for (auto& cl : out.classes)
    cl.erase(std::remove(cl.begin(), cl.end(), element), cl.end());
  out.classes[to_class].push_back(element);
  std::sort(out.classes[to_class].begin(), out.classes[to_class].end());
  return out;
}

bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST_CASE("golden coloring transcriptions") {
  auto c29 = load_fixture_coloring("63_65_z29");
  REQUIRE(c29.atom_names == std::vector<std::string>{"a", "b", "c"});
  CHECK(c29.classes[0].size() == 12);
  CHECK(c29.classes[1].size() == 8);
  CHECK(c29.classes[2].size() == 8);
  CHECK(c29.group.order() == 29);

  auto c46 = load_fixture_coloring("57_65_z46");
  CHECK(c46.classes[0].size() == 23);
  CHECK(c46.classes[1].size() == 10);
  CHECK(c46.classes[2].size() == 12);
  CHECK(c46.group.order() == 46);

  // the involution 23 sits in class a
  CHECK(std::binary_search(c46.classes[0].begin(), c46.classes[0].end(), 23));
}

TEST_CASE("golden verifications") {
  auto r29 = verify(*find_in_catalog("63_65"), load_fixture_coloring("63_65_z29"));
  CHECK(r29.valid);
  CHECK(r29.violations.empty());

  auto r46 = verify(*find_in_catalog("57_65"), load_fixture_coloring("57_65_z46"));
  CHECK(r46.valid);
}

TEST_CASE("check_partition pinpoints faults") {
  auto c = load_fixture_coloring("63_65_z29");
  CHECK(check_partition(c).empty());

  // move 1 from b to a: inverse closure breaks on both sides
  auto mutated = move_element(c, 1, 0);
  auto faults = check_partition(mutated);
  CHECK(!faults.empty());
  bool saw_1_in_a = false, saw_28_in_b = false;
  for (const auto& v : faults) {
    CHECK(v.kind == ViolationKind::NotInverseClosed);
    if (v.element == 1 && v.atom == 0) saw_1_in_a = true;
    if (v.element == 28 && v.atom == 1) saw_28_in_b = true;
  }
  CHECK(saw_1_in_a);
  CHECK(saw_28_in_b);

  // partition-level verdict short-circuits the cycle checks
  auto report = verify(*find_in_catalog("63_65"), mutated);
  CHECK(!report.valid);
  CHECK(!has_kind(report.violations, ViolationKind::ForbiddenWitnessed));
  CHECK(!has_kind(report.violations, ViolationKind::MandatoryUnwitnessed));

  // unassigned and doubly assigned elements
  auto g5 = FiniteGroup::cyclic(5);
  auto holes = make_coloring(g5, {"a", "b"}, {{1, 4}, {2}});
  auto pv = check_partition(holes);
  CHECK(has_kind(pv, ViolationKind::NotPartition));  // 3 missing
  CHECK(has_kind(pv, ViolationKind::NotInverseClosed));

  auto doubled = make_coloring(g5, {"a", "b"}, {{1, 2, 3, 4}, {2, 3}});
  CHECK(has_kind(check_partition(doubled), ViolationKind::NotPartition));

  auto empty_class = make_coloring(g5, {"a", "b"}, {{1, 2, 3, 4}, {}});
  CHECK(has_kind(check_partition(empty_class), ViolationKind::EmptyClass));
}

TEST_CASE("check_forbidden on the golden colorings") {
  CHECK(check_forbidden(*find_in_catalog("63_65"), load_fixture_coloring("63_65_z29"))
            .empty());
  CHECK(check_forbidden(*find_in_catalog("57_65"), load_fixture_coloring("57_65_z46"))
            .empty());

  // swapping classes b and c in name only keeps 63_65 valid ({bbb,ccc} is
  // symmetric in b,c and the allowed set maps to itself)
  auto c = load_fixture_coloring("63_65_z29");
  Coloring swapped = c;
  std::swap(swapped.classes[1], swapped.classes[2]);
  CHECK(check_forbidden(*find_in_catalog("63_65"), swapped).empty());
  CHECK(verify(*find_in_catalog("63_65"), swapped).valid);

  // the 63_65 coloring realizes a forbidden cycle of 33_65
  auto bad = verify(*find_in_catalog("33_65"), c);
  CHECK(!bad.valid);
  bool witnessed_bcc_or_cbb = false;
  for (const auto& v : bad.violations)
    if (v.kind == ViolationKind::ForbiddenWitnessed &&
        (v.cycle == DiversityCycle::of(1, 2, 2) ||
         v.cycle == DiversityCycle::of(1, 1, 2))) {
      witnessed_bcc_or_cbb = true;
      // the witness re-checks from its data alone
      CHECK(c.group.op(v.y, v.z) == v.result);
    }
  CHECK(witnessed_bcc_or_cbb);
}

TEST_CASE("check_mandatory") {
  CHECK(check_mandatory(*find_in_catalog("63_65"), load_fixture_coloring("63_65_z29"))
            .empty());

  AtomStructure flex1("flex1", {"a"}, {});
  auto z3 = make_coloring(FiniteGroup::cyclic(3), {"a"}, {{1, 2}});
  CHECK(check_mandatory(flex1, z3).empty());
  CHECK(verify(flex1, z3).valid);

  auto z2 = make_coloring(FiniteGroup::cyclic(2), {"a"}, {{1}});
  auto faults = check_mandatory(flex1, z2);
  REQUIRE(faults.size() == 1);
  CHECK(faults[0].kind == ViolationKind::MandatoryUnwitnessed);
  CHECK(faults[0].cycle == DiversityCycle::of(0, 0, 0));
  CHECK(faults[0].element == 1);
}

TEST_CASE("verify rejects mismatched class keys and invalid algebras") {
  auto c = load_fixture_coloring("63_65_z29");
  Coloring renamed = c;
  renamed.atom_names[2] = "d";
  CHECK_THROWS_AS(verify(*find_in_catalog("63_65"), renamed), Error);

  Coloring fewer = c;
  fewer.atom_names.pop_back();
  fewer.classes.pop_back();
  CHECK_THROWS_AS(verify(*find_in_catalog("63_65"), fewer), Error);

  AtomStructure bad = AtomStructure::from_names(
      "bad", {"a", "b"}, {{{"a", "a", "b"}}, {{"a", "b", "b"}}});
  auto g5 = FiniteGroup::cyclic(5);
  CHECK_THROWS_AS(verify(bad, make_coloring(g5, {"a", "b"}, {{1, 4}, {2, 3}})),
                  Error);
}

TEST_CASE("mutation sensitivity of the golden colorings") {
  struct Golden {
    const char* algebra;
    const char* fixture;
  };
  for (auto [algebra, fixture] : {Golden{"63_65", "63_65_z29"},
                                  Golden{"57_65", "57_65_z46"}}) {
    const AtomStructure& s = *find_in_catalog(algebra);
    auto c = load_fixture_coloring(fixture);
    int runs = 0;
    for (int x = 1; x < c.group.order(); ++x) {
      int home = c.class_of(x);
      REQUIRE(home >= 0);
      for (int t = 0; t < 3; ++t) {
        if (t == home) continue;
        auto report = verify(s, move_element(c, x, t));
        CHECK(!report.valid);
        ++runs;
      }
    }
    CHECK(runs == (c.group.order() - 1) * 2);
  }
}

TEST_CASE("multiplier equivariance at n = 29") {
  const AtomStructure& s = *find_in_catalog("63_65");
  auto c = load_fixture_coloring("63_65_z29");
  REQUIRE(verify(s, c).valid);

  for (int u = 1; u < 29; ++u) {  // 29 prime: every nonzero u is a unit
    Coloring mapped = c;
    for (auto& cl : mapped.classes) {
      for (auto& x : cl) x = (x * u) % 29;
      std::sort(cl.begin(), cl.end());
    }
    CHECK(verify(s, mapped).valid);
  }

  // an invalid coloring stays invalid under multipliers
  auto broken = move_element(c, 3, 1);
  for (int u : {2, 5, 28}) {
    Coloring mapped = broken;
    for (auto& cl : mapped.classes) {
      for (auto& x : cl) x = (x * u) % 29;
      std::sort(cl.begin(), cl.end());
    }
    CHECK(!verify(s, mapped).valid);
  }
}

TEST_CASE("forbidden emptiness is orientation invariant for inverse-closed classes") {
  std::mt19937 rng(20240815);
  for (int n : {7, 9, 11, 12}) {
    auto g = FiniteGroup::cyclic(n);
    auto orbits = inverse_orbits(g);
    for (int trial = 0; trial < 60; ++trial) {
      // random inverse-closed 3-class assignment (classes may be empty)
      std::vector<std::vector<int>> classes(3);
      for (const auto& o : orbits) {
        int t = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int i = 0; i < o.size; ++i) classes[t].push_back(o.members[i]);
      }
      for (auto& cl : classes) std::sort(cl.begin(), cl.end());

      auto composes_into = [&](int i, int j, int k) {
        for (int y : classes[i])
          for (int z : classes[j]) {
            int x = g.op(y, z);
            if (x != 0 &&
                std::binary_search(classes[k].begin(), classes[k].end(), x))
              return true;
          }
        return false;
      };
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          for (int k = j; k < 3; ++k) {
            bool a = composes_into(i, j, k);
            CHECK(a == composes_into(j, k, i));
            CHECK(a == composes_into(k, i, j));
            CHECK(a == composes_into(j, i, k));
          }
    }
  }
}

TEST_CASE("ramsey check") {
  // the Z/29 coloring witnesses R(4,3,3) > 29
  auto c = load_fixture_coloring("63_65_z29");
  auto r = ramsey_check(c, RamseyBounds{{{"a", 4}, {"b", 3}, {"c", 3}}});
  CHECK(r.clique_free());
  REQUIRE(r.classes.size() == 3);
  for (const auto& pc : r.classes) CHECK(pc.clique_free);

  // class a does contain triangles (only K4 is excluded)
  auto r3 = ramsey_check(c, RamseyBounds{{{"a", 3}}});
  CHECK(!r3.clique_free());

  // all-differences class: triangles everywhere
  auto g5 = FiniteGroup::cyclic(5);
  auto full = make_coloring(g5, {"a"}, {{1, 2, 3, 4}});
  auto rt = ramsey_check(full, RamseyBounds{{{"a", 3}}});
  REQUIRE(!rt.clique_free());
  REQUIRE(rt.classes[0].clique.size() == 3);
  // witness re-checks: all pairwise differences lie in the class
  auto& K = rt.classes[0].clique;
  for (size_t i = 0; i < K.size(); ++i)
    for (size_t j = i + 1; j < K.size(); ++j) {
      int d = ((K[j] - K[i]) % 5 + 5) % 5;
      CHECK((std::binary_search(full.classes[0].begin(), full.classes[0].end(), d) ||
             std::binary_search(full.classes[0].begin(), full.classes[0].end(),
                                (5 - d) % 5)));
    }

  CHECK_THROWS_AS(
      ramsey_check(make_coloring(FiniteGroup::symmetric(3), {"a"},
                                 {{1, 2, 3, 4, 5}}),
                   RamseyBounds{{{"a", 3}}}),
      Error);
  CHECK_THROWS_AS(ramsey_check(c, RamseyBounds{{{"a", 2}}}), Error);
  CHECK_THROWS_AS(ramsey_check(c, RamseyBounds{{{"q", 3}}}), Error);
}

TEST_CASE("ramsey bound 3 agrees with forbidden-cycle witnessing") {
  // exhaustive over all inverse-closed 2-class partitions, n <= 12
  AtomStructure s = AtomStructure::from_names("xxx", {"x", "y"}, {{{"x", "x", "x"}}});
  for (int n = 4; n <= 12; ++n) {
    auto g = FiniteGroup::cyclic(n);
    auto orbits = inverse_orbits(g);
    const int m = static_cast<int>(orbits.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<std::vector<int>> classes(2);
      for (int i = 0; i < m; ++i)
        for (int q = 0; q < orbits[i].size; ++q)
          classes[(mask >> i) & 1].push_back(orbits[i].members[q]);
      if (classes[0].empty() || classes[1].empty()) continue;
      for (auto& cl : classes) std::sort(cl.begin(), cl.end());
      auto c = make_coloring(g, {"x", "y"}, classes);

      bool triangle = !ramsey_check(c, RamseyBounds{{{"x", 3}}}).clique_free();
      bool witnessed = !check_forbidden(s, c).empty();
      CHECK(triangle == witnessed);
    }
  }
}

TEST_CASE("violation descriptions mention their data") {
  auto c = load_fixture_coloring("63_65_z29");
  auto bad = verify(*find_in_catalog("33_65"), c);
  REQUIRE(!bad.violations.empty());
  for (const auto& v : bad.violations) {
    auto text = v.describe(c);
    CHECK(!text.empty());
  }
}
