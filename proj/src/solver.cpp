#include "relrep/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace relrep {

void SatSolver::ensure_vars(int num_vars) {
  while (static_cast<int>(assign_.size()) < num_vars) {
    assign_.push_back(-1);
    phase_.push_back(0);
    reason_.push_back(-1);
    level_.push_back(0);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(static_cast<int>(assign_.size()) - 1);
  }
}

void SatSolver::attach(int ci) {
  const auto& lits = clauses_[ci].lits;
  watches_[neg(lits[0])].push_back({ci, lits[1]});
  watches_[neg(lits[1])].push_back({ci, lits[0]});
}

int SatSolver::add_internal(std::vector<int> lits, bool learnt) {
  clauses_.push_back(Clause{std::move(lits), learnt, false, 0.0, 0});
  int ci = static_cast<int>(clauses_.size()) - 1;
  attach(ci);
  if (learnt) ++learnt_count_;
  return ci;
}

void SatSolver::add_clause(const std::vector<int>& dimacs_lits) {
  if (unsat_) return;
  std::vector<int> lits;
  lits.reserve(dimacs_lits.size());
  int max_var = 0;
  for (int dl : dimacs_lits) max_var = std::max(max_var, dl > 0 ? dl : -dl);
  ensure_vars(max_var);
  for (int dl : dimacs_lits) lits.push_back(lit_of(dl));
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    if (lits[i] == neg(lits[i + 1])) return;  // tautology

  // drop root-level false literals; detect satisfied clauses
  std::vector<int> pruned;
  for (int lit : lits) {
    int v = value(lit);
    if (v == 1) return;  // already satisfied at root
    if (v == -1) pruned.push_back(lit);
  }
  if (pruned.empty()) {
    unsat_ = true;
    return;
  }
  if (pruned.size() == 1) {
    enqueue(pruned[0], -1);
    if (propagate() != -1) unsat_ = true;
    return;
  }
  add_internal(std::move(pruned), false);
}

void SatSolver::enqueue(int lit, int reason) {
  int v = var_of(lit);
  assign_[v] = static_cast<int8_t>(1 ^ (lit & 1));
  reason_[v] = reason;
  level_[v] = static_cast<int>(trail_lim_.size());
  trail_.push_back(lit);
}

int SatSolver::propagate() {
  while (prop_head_ < trail_.size()) {
    const int lit = trail_[prop_head_++];
    ++stats_propagations_;
    auto& ws = watches_[lit];
    size_t keep = 0;
    for (size_t wi = 0; wi < ws.size(); ++wi) {
      const Watcher w = ws[wi];
      if (value(w.blocker) == 1) {
        ws[keep++] = w;
        continue;
      }
      Clause& c = clauses_[w.clause];
      if (c.deleted) continue;
      auto& ls = c.lits;
      const int falsified = neg(lit);
      if (ls[0] == falsified) std::swap(ls[0], ls[1]);
      // ls[1] == falsified now
      if (value(ls[0]) == 1) {
        ws[keep++] = {w.clause, ls[0]};
        continue;
      }
      bool moved = false;
      for (size_t q = 2; q < ls.size(); ++q) {
        if (value(ls[q]) != 0) {
          std::swap(ls[1], ls[q]);
          watches_[neg(ls[1])].push_back({w.clause, ls[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // unit or conflict
      ws[keep++] = {w.clause, ls[0]};
      if (value(ls[0]) == 0) {
        for (size_t rest = wi + 1; rest < ws.size(); ++rest) ws[keep++] = ws[rest];
        ws.resize(keep);
        return w.clause;
      }
      enqueue(ls[0], w.clause);
    }
    ws.resize(keep);
  }
  return -1;
}

void SatSolver::bump_var(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void SatSolver::bump_clause(int ci) {
  clauses_[ci].activity += 1.0;
}

void SatSolver::decay_activities() { var_inc_ /= 0.95; }

void SatSolver::analyze(int conflict, std::vector<int>& learnt,
                        int& backjump_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int count = 0;
  int lit = -1;
  size_t index = trail_.size();
  int ci = conflict;
  const int current = static_cast<int>(trail_lim_.size());

  do {
    Clause& c = clauses_[ci];
    if (c.learnt) bump_clause(ci);
    for (int q : c.lits) {
      if (lit != -1 && q == lit) continue;  // the resolved-on literal itself
      int v = var_of(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= current)
          ++count;
        else
          learnt.push_back(q);
      }
    }
    // next literal on trail that is marked
    do {
      lit = trail_[--index];
    } while (!seen_[var_of(lit)]);
    seen_[var_of(lit)] = 0;
    ci = reason_[var_of(lit)];
    --count;
  } while (count > 0);
  learnt[0] = neg(lit);

  // minimization: drop literals whose whole reason is already covered
  std::vector<int> minimized{learnt[0]};
  for (size_t i = 1; i < learnt.size(); ++i) {
    int v = var_of(learnt[i]);
    int r = reason_[v];
    bool redundant = false;
    if (r >= 0) {
      redundant = true;
      for (int q : clauses_[r].lits) {
        int qv = var_of(q);
        if (qv == v || level_[qv] == 0) continue;
        if (!seen_[qv]) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant) minimized.push_back(learnt[i]);
  }
  for (size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;
  learnt = std::move(minimized);

  backjump_level = 0;
  if (learnt.size() > 1) {
    size_t best = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[best])]) best = i;
    std::swap(learnt[1], learnt[best]);
    backjump_level = level_[var_of(learnt[1])];
  }
}

void SatSolver::cancel_until(int target_level) {
  if (static_cast<int>(trail_lim_.size()) <= target_level) return;
  size_t bound = trail_lim_[target_level];
  for (size_t i = trail_.size(); i-- > bound;) {
    int v = var_of(trail_[i]);
    phase_[v] = assign_[v];
    assign_[v] = -1;
    reason_[v] = -1;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(bound);
  trail_lim_.resize(target_level);
  prop_head_ = trail_.size();
}

void SatSolver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void SatSolver::heap_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void SatSolver::heap_down(int i) {
  int v = heap_[i];
  const int size = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= size) break;
    if (child + 1 < size && activity_[heap_[child + 1]] > activity_[heap_[child]])
      ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

int SatSolver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_down(0);
  }
  return v;
}

int SatSolver::pick_branch_lit() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assign_[v] < 0) return 2 * v + (phase_[v] == 0 ? 1 : 0);
  }
  return -1;
}

void SatSolver::reduce_db() {
  std::vector<int> learnts;
  for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
    Clause& c = clauses_[ci];
    if (!c.learnt || c.deleted || c.lits.size() <= 2) continue;
    bool locked = false;
    int v0 = var_of(c.lits[0]);
    if (assign_[v0] >= 0 && reason_[v0] == ci) locked = true;
    if (!locked) learnts.push_back(ci);
  }
  std::sort(learnts.begin(), learnts.end(), [&](int a, int b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  for (size_t i = 0; i < learnts.size() / 2; ++i) {
    clauses_[learnts[i]].deleted = true;
    --learnt_count_;
  }
  // rebuild watches without deleted clauses
  for (auto& ws : watches_) ws.clear();
  for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci)
    if (!clauses_[ci].deleted) attach(ci);
}

namespace {

// Luby restart sequence 1,1,2,1,1,2,4,... (0-based index)
uint64_t luby(uint64_t i) {
  uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i %= size;
  }
  return uint64_t(1) << seq;
}

}  // namespace

SatSolver::Result SatSolver::solve(double time_budget_sec) {
  if (unsat_) return Result::Unsat;
  const auto start = std::chrono::steady_clock::now();
  const bool bounded = time_budget_sec > 0;

  if (propagate() != -1) {
    unsat_ = true;
    return Result::Unsat;
  }

  std::vector<int> learnt;
  uint64_t restart_round = 0;
  uint64_t conflicts_until_restart = 128 * luby(restart_round);
  uint64_t conflicts_this_round = 0;
  uint64_t reduce_bound = 4000;

  for (;;) {
    int conflict = propagate();
    if (conflict != -1) {
      ++stats_conflicts_;
      ++conflicts_this_round;
      if (trail_lim_.empty()) {
        unsat_ = true;
        return Result::Unsat;
      }
      int backjump = 0;
      analyze(conflict, learnt, backjump);
      cancel_until(backjump);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = add_internal(learnt, true);
        enqueue(learnt[0], ci);
      }
      decay_activities();

      if ((stats_conflicts_ & 1023) == 0 && bounded) {
        auto elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > time_budget_sec) return Result::Unknown;
      }
      if (learnt_count_ >= reduce_bound) {
        reduce_db();
        reduce_bound += 1000;
      }
    } else {
      if (conflicts_this_round >= conflicts_until_restart) {
        conflicts_this_round = 0;
        conflicts_until_restart = 128 * luby(++restart_round);
        cancel_until(0);
      }
      int lit = pick_branch_lit();
      if (lit == -1) {
        // full assignment: record and double-check the model
        model_.assign(assign_.begin(), assign_.end());
        for (const auto& c : clauses_) {
          if (c.deleted) continue;
          bool sat = false;
          for (int l : c.lits)
            if (value(l) == 1) {
              sat = true;
              break;
            }
          if (!sat) return Result::Unknown;  // must never happen
        }
        cancel_until(0);
        return Result::Sat;
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(lit, -1);
    }
  }
}

}  // namespace relrep
