#include <random>
#include <vector>

#include "doctest.h"
#include "relrep/solver.hpp"

using namespace relrep;
using Result = SatSolver::Result;

namespace {

// Exhaustive truth-table check, the independent oracle for small formulas.
bool brute_force_sat(int num_vars, const std::vector<std::vector<int>>& clauses) {
  for (uint32_t bits = 0; bits < (uint32_t(1) << num_vars); ++bits) {
    bool all = true;
    for (const auto& clause : clauses) {
      bool any = false;
      for (int lit : clause) {
        int v = lit > 0 ? lit : -lit;
        bool val = (bits >> (v - 1)) & 1;
        if ((lit > 0) == val) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<std::vector<int>> pigeonhole(int holes) {
  // holes+1 pigeons into `holes` holes: classic unsat family
  std::vector<std::vector<int>> clauses;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p <= holes; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    clauses.push_back(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p1 = 0; p1 <= holes; ++p1)
      for (int p2 = p1 + 1; p2 <= holes; ++p2)
        clauses.push_back({-var(p1, h), -var(p2, h)});
  return clauses;
}

}  // namespace

TEST_CASE("solver basics") {
  {
    SatSolver s;
    s.add_clause({1});
    CHECK(s.solve() == Result::Sat);
    CHECK(s.model_value(1));
  }
  {
    SatSolver s;
    s.add_clause({1});
    s.add_clause({-1});
    CHECK(s.solve() == Result::Unsat);
  }
  {
    SatSolver s;
    s.add_clause({1, -1});  // tautology, dropped
    s.add_clause({2, 3});
    CHECK(s.solve() == Result::Sat);
  }
  {
    SatSolver s;
    s.add_clause({1, 1, 1});  // duplicates collapse to a unit
    CHECK(s.solve() == Result::Sat);
    CHECK(s.model_value(1));
  }
  {
    SatSolver s;
    s.add_clause({});  // empty clause
    CHECK(s.solve() == Result::Unsat);
  }
  {
    // unit propagation chain forcing a conflict
    SatSolver s;
    s.add_clause({1});
    s.add_clause({-1, 2});
    s.add_clause({-2, 3});
    s.add_clause({-3, -1});
    CHECK(s.solve() == Result::Unsat);
  }
}

TEST_CASE("pigeonhole instances are unsat") {
  for (int holes : {2, 3, 4, 5}) {
    SatSolver s;
    for (const auto& c : pigeonhole(holes)) s.add_clause(c);
    CHECK(s.solve() == Result::Unsat);
  }
  // and the satisfiable variant with equal counts
  SatSolver s;
  const int holes = 4;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < holes; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    s.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p1 = 0; p1 < holes; ++p1)
      for (int p2 = p1 + 1; p2 < holes; ++p2)
        s.add_clause({-var(p1, h), -var(p2, h)});
  CHECK(s.solve() == Result::Sat);
}

TEST_CASE("random 3-sat agrees with brute force") {
  std::mt19937 rng(987123);
  for (int round = 0; round < 300; ++round) {
    const int num_vars = 6 + static_cast<int>(rng() % 11);  // 6..16
    const int num_clauses = static_cast<int>(num_vars * (2.0 + (rng() % 30) / 10.0));
    std::vector<std::vector<int>> clauses;
    for (int i = 0; i < num_clauses; ++i) {
      std::vector<int> c;
      for (int q = 0; q < 3; ++q) {
        int v = 1 + static_cast<int>(rng() % num_vars);
        c.push_back(rng() % 2 ? v : -v);
      }
      clauses.push_back(c);
    }

    SatSolver s;
    for (const auto& c : clauses) s.add_clause(c);
    auto verdict = s.solve();
    bool expected = brute_force_sat(num_vars, clauses);
    REQUIRE(verdict == (expected ? Result::Sat : Result::Unsat));
    if (verdict == Result::Sat) {
      // model satisfies every clause
      for (const auto& c : clauses) {
        bool any = false;
        for (int lit : c)
          if (s.model_value(lit > 0 ? lit : -lit) == (lit > 0)) any = true;
        REQUIRE(any);
      }
    }
  }
}

TEST_CASE("time budget reports unknown") {
  SatSolver s;
  for (const auto& c : pigeonhole(9)) s.add_clause(c);
  auto r = s.solve(0.01);
  CHECK((r == Result::Unknown || r == Result::Unsat));
}
