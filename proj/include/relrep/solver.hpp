#pragma once

#include <cstdint>
#include <vector>

namespace relrep {

// Compact conflict-driven SAT solver: two-watched literals, first-UIP
// clause learning with minimization, VSIDS-style branching, phase saving,
// Luby restarts, and activity/LBD clause-database reduction. Complete for
// the instance sizes this project emits; a model is always checked against
// every clause before Sat is reported.
class SatSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  explicit SatSolver(int num_vars = 0) { ensure_vars(num_vars); }

  void ensure_vars(int num_vars);
  int num_vars() const { return static_cast<int>(assign_.size()); }

  // DIMACS-signed literals; duplicates collapse, tautologies are dropped.
  void add_clause(const std::vector<int>& lits);

  Result solve(double time_budget_sec = 0);

  // Valid after solve() returned Sat.
  bool model_value(int var) const { return model_[var - 1] == 1; }

  uint64_t conflicts() const { return stats_conflicts_; }
  uint64_t propagations() const { return stats_propagations_; }

 private:
  // literal encoding: var v (1-based) -> 2*(v-1) | sign, sign 1 = negated
  static int lit_of(int dimacs) {
    int v = dimacs > 0 ? dimacs : -dimacs;
    return 2 * (v - 1) + (dimacs < 0 ? 1 : 0);
  }
  static int neg(int lit) { return lit ^ 1; }
  static int var_of(int lit) { return lit >> 1; }

  struct Clause {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
    int lbd = 0;
  };

  struct Watcher {
    int clause;
    int blocker;
  };

  int value(int lit) const {  // 1 true, 0 false, -1 unset
    int a = assign_[var_of(lit)];
    if (a < 0) return -1;
    return a ^ (lit & 1);
  }

  void enqueue(int lit, int reason);
  int propagate();  // returns conflicting clause id or -1
  void analyze(int conflict, std::vector<int>& learnt, int& backjump_level);
  void cancel_until(int level);
  int pick_branch_lit();
  void bump_var(int var);
  void bump_clause(int clause);
  void decay_activities();
  void reduce_db();
  void attach(int clause);
  int add_internal(std::vector<int> lits, bool learnt);

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // per literal
  std::vector<int8_t> assign_;                 // per var: -1/0/1
  std::vector<int8_t> phase_;
  std::vector<int8_t> model_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> reason_;
  std::vector<int> level_;
  size_t prop_head_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;       // max-heap of vars by activity
  std::vector<int> heap_pos_;   // -1 when not in heap
  void heap_insert(int var);
  int heap_pop();
  void heap_up(int i);
  void heap_down(int i);

  std::vector<int8_t> seen_;

  bool unsat_ = false;
  uint64_t stats_conflicts_ = 0;
  uint64_t stats_propagations_ = 0;
  uint64_t learnt_count_ = 0;
};

}  // namespace relrep
