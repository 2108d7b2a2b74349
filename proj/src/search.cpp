#include "relrep/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "relrep/cnf.hpp"

namespace relrep {

namespace {

using Clock = std::chrono::steady_clock;

struct Backtracker {
  const AtomStructure& s;
  const FiniteGroup& g;
  int n, k, m;
  std::vector<InverseOrbit> orbits;

  struct Cycle {
    int i, j, t;
  };
  std::vector<Cycle> forbidden;
  // per target atom: flank pairs of every allowed cycle containing it
  std::vector<std::vector<std::pair<int, int>>> targets;

  std::vector<int8_t> elem_atom;           // -1 unassigned
  std::vector<std::vector<int>> members;   // per atom, in assignment order
  std::vector<int> assigned;               // all assigned elements, stack
  std::vector<int8_t> orbit_atom;

  // multiplier pruning state (cyclic groups, existence search only)
  bool prune_multipliers = false;
  std::vector<std::vector<int>> unit_perm;  // per unit: orbit index map

  uint64_t nodes = 0;
  bool has_deadline = false;
  Clock::time_point deadline;
  bool timed_out = false;

  std::vector<int> solution_orbit_atom;

  Backtracker(const AtomStructure& s_, const FiniteGroup& g_)
      : s(s_), g(g_), n(g_.order()), k(s_.atom_count()),
        orbits(inverse_orbits(g_)) {
    m = static_cast<int>(orbits.size());
    for (const auto& c : s.forbidden())
      forbidden.push_back({c.atoms[0], c.atoms[1], c.atoms[2]});
    targets.resize(k);
    for (const auto& c : s.allowed_cycles())
      for (int pos = 0; pos < 3; ++pos) {
        if (pos > 0 && c.atoms[pos] == c.atoms[pos - 1]) continue;
        std::array<int, 2> flank{};
        int w = 0;
        for (int q = 0; q < 3; ++q)
          if (q != pos) flank[w++] = c.atoms[q];
        targets[c.atoms[pos]].push_back({flank[0], flank[1]});
      }
    elem_atom.assign(n, -1);
    members.resize(k);
    orbit_atom.assign(m, -1);
  }

  void setup_multiplier_pruning() {
    if (!g.is_cyclic_addition() || n < 3) return;
    std::vector<int> orbit_of(n, -1);
    for (int i = 0; i < m; ++i)
      for (int q = 0; q < orbits[i].size; ++q)
        orbit_of[orbits[i].members[q]] = i;
    for (int u = 2; u < n; ++u) {
      if (std::gcd(u, n) != 1) continue;
      std::vector<int> perm(m);
      for (int i = 0; i < m; ++i)
        perm[i] = orbit_of[(orbits[i].representative * u) % n];
      unit_perm.push_back(std::move(perm));
    }
    prune_multipliers = !unit_perm.empty();
  }

  void assign(int orbit, int atom) {
    orbit_atom[orbit] = static_cast<int8_t>(atom);
    for (int q = 0; q < orbits[orbit].size; ++q) {
      int x = orbits[orbit].members[q];
      elem_atom[x] = static_cast<int8_t>(atom);
      members[atom].push_back(x);
      assigned.push_back(x);
    }
  }

  void unassign(int orbit, int atom) {
    orbit_atom[orbit] = -1;
    for (int q = 0; q < orbits[orbit].size; ++q) {
      int x = orbits[orbit].members[q];
      elem_atom[x] = -1;
      members[atom].pop_back();
      assigned.pop_back();
    }
  }

  // Any forbidden cycle witnessed among assigned elements that involves the
  // newly assigned orbit? Exact: a new witness must use a new element.
  bool forbidden_hit(int orbit, int atom) const {
    for (const auto& c : forbidden) {
      for (int q = 0; q < orbits[orbit].size; ++q) {
        const int w = orbits[orbit].members[q];
        if (atom == c.i) {
          for (int z : members[c.j]) {
            int x = g.op(w, z);
            if (x != 0 && elem_atom[x] == c.t) return true;
          }
        }
        if (atom == c.j) {
          for (int y : members[c.i]) {
            int x = g.op(y, w);
            if (x != 0 && elem_atom[x] == c.t) return true;
          }
        }
        if (atom == c.t) {
          for (int y : members[c.i]) {
            int z = g.op(g.inv(y), w);  // y . z = w
            if (z != 0 && elem_atom[z] == c.j) return true;
          }
        }
      }
    }
    return false;
  }

  // An assigned element whose every potential mandatory witness is already
  // assigned away can never be witnessed; prune. With all orbits assigned
  // this is exactly the mandatory check.
  bool mandatory_dead() const {
    for (int x : assigned) {
      const int tx = elem_atom[x];
      for (const auto& [fi, fj] : targets[tx]) {
        bool live = false;
        for (int y = 1; y < n; ++y) {
          const int cy = elem_atom[y];
          if (cy >= 0 && cy != fi) continue;
          const int z = g.op(g.inv(y), x);
          if (z == 0) continue;
          const int cz = elem_atom[z];
          if (cz < 0 || cz == fj) {
            live = true;
            break;
          }
        }
        if (!live) return true;
      }
    }
    return false;
  }

  // Remaining orbits must be able to fill every still-empty class.
  bool nonempty_feasible(int next_depth) const {
    int empty = 0;
    for (int t = 0; t < k; ++t)
      if (members[t].empty()) ++empty;
    return m - next_depth >= empty;
  }

  // Lex-leader pruning over multiplier images of the orbit-assignment
  // vector. Only prunes when the comparison is decided by assigned entries,
  // so the lex-least solution always survives.
  bool multiplier_pruned() const {
    for (const auto& perm : unit_perm) {
      for (int i = 0; i < m; ++i) {
        const int a = orbit_atom[i];
        if (a < 0) break;
        const int b = orbit_atom[perm[i]];
        if (b < 0) break;
        if (b < a) return true;
        if (b > a) break;
      }
    }
    return false;
  }

  bool expired() {
    if (!has_deadline) return false;
    if ((nodes & 1023) == 0 && Clock::now() > deadline) timed_out = true;
    return timed_out;
  }

  bool dfs(int depth) {
    if (depth == m) {
      solution_orbit_atom.assign(orbit_atom.begin(), orbit_atom.end());
      return true;
    }
    for (int atom = 0; atom < k; ++atom) {
      ++nodes;
      if (expired()) return false;
      assign(depth, atom);
      if (!forbidden_hit(depth, atom) && nonempty_feasible(depth + 1) &&
          !(prune_multipliers && multiplier_pruned()) && !mandatory_dead()) {
        if (dfs(depth + 1)) return true;
        if (timed_out) return false;
      }
      unassign(depth, atom);
    }
    return false;
  }
};

Coloring coloring_from_orbit_atoms(const AtomStructure& s, const FiniteGroup& g,
                                   const std::vector<InverseOrbit>& orbits,
                                   const std::vector<int>& orbit_atom) {
  Coloring c{g, s.atom_names(), std::vector<std::vector<int>>(s.atom_count())};
  for (size_t i = 0; i < orbits.size(); ++i)
    for (int q = 0; q < orbits[i].size; ++q)
      c.classes[orbit_atom[i]].push_back(orbits[i].members[q]);
  for (auto& cl : c.classes) std::sort(cl.begin(), cl.end());
  return c;
}

SearchOutcome search_backtrack(const AtomStructure& s, const FiniteGroup& g,
                               const SearchConfig& cfg) {
  const auto start = Clock::now();
  Backtracker bt(s, g);
  if (cfg.prune_multipliers) bt.setup_multiplier_pruning();
  if (cfg.time_budget_sec > 0) {
    bt.has_deadline = true;
    bt.deadline = start + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(cfg.time_budget_sec));
  }

  SearchOutcome out;
  bool found = bt.m >= bt.k && bt.dfs(0);
  out.stats.nodes = bt.nodes;
  out.stats.wall_sec = std::chrono::duration<double>(Clock::now() - start).count();
  if (found) {
    Coloring c = coloring_from_orbit_atoms(s, g, bt.orbits, bt.solution_orbit_atom);
    auto report = verify(s, c);
    if (!report.valid)
      throw std::logic_error("search produced a coloring that fails verification");
    out.result = SearchOutcome::Result::Found;
    out.coloring = std::move(c);
  } else if (bt.timed_out) {
    out.result = SearchOutcome::Result::Timeout;
  } else {
    out.result = SearchOutcome::Result::None;
  }
  return out;
}

SearchOutcome search_sat(const AtomStructure& s, const FiniteGroup& g,
                         const SearchConfig& cfg) {
  if (!g.is_cyclic_addition())
    throw Error("sat engine supports cyclic groups only; use backtrack");
  if (cfg.solver_cmd.empty())
    throw Error("sat engine requires a solver command");
  const auto start = Clock::now();
  SearchOutcome out;

  const int orbit_count = static_cast<int>(inverse_orbits(g).size());
  if (g.order() < 2 || orbit_count < s.atom_count()) {
    // fewer inverse orbits than atoms: no partition into nonempty
    // inverse-closed classes exists
    out.result = SearchOutcome::Result::None;
    out.stats.wall_sec =
        std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }

  CnfInstance inst = encode(s, g.order(), cfg.symmetry_break);
  SolveOutcome solved =
      solve_external(inst, s, cfg.solver_cmd, cfg.time_budget_sec);
  out.stats.wall_sec = std::chrono::duration<double>(Clock::now() - start).count();
  switch (solved.status) {
    case SolveOutcome::Status::Sat:
      out.result = SearchOutcome::Result::Found;
      out.coloring = std::move(solved.coloring);
      break;
    case SolveOutcome::Status::Unsat:
      out.result = SearchOutcome::Result::None;
      break;
    case SolveOutcome::Status::Timeout:
      out.result = SearchOutcome::Result::Timeout;
      break;
    case SolveOutcome::Status::Error:
      throw Error("solver error: " + solved.message);
  }
  return out;
}

}  // namespace

SearchOutcome search_group(const AtomStructure& s, const FiniteGroup& g,
                           const SearchConfig& cfg) {
  if (!validate_ra(s).valid())
    throw Error("algebra '" + s.name() + "' is not a valid integral RA");
  if (cfg.engine == SearchConfig::Engine::Sat) return search_sat(s, g, cfg);
  return search_backtrack(s, g, cfg);
}

SpectrumResult spectrum(const AtomStructure& s, int n_min, int n_max,
                        const SearchConfig& cfg) {
  if (n_min < 1 || n_min > n_max)
    throw Error("spectrum: need 1 <= n_min <= n_max");
  SpectrumResult result;
  result.n_min = n_min;
  result.n_max = n_max;

  const int count = n_max - n_min + 1;
  std::vector<SearchOutcome> outcomes(count);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  int width = std::max(1, cfg.parallel_width);
  width = std::min(width, count);
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        outcomes[i] = search_group(s, FiniteGroup::cyclic(n_min + i), cfg);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed.store(true);
        return;
      }
    }
  };
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw Error("spectrum: " + error_message);

  for (int i = 0; i < count; ++i) {
    const int n = n_min + i;
    result.stats[n] = outcomes[i].stats;
    switch (outcomes[i].result) {
      case SearchOutcome::Result::Found:
        result.found.push_back(n);
        result.certificates.emplace(n, std::move(*outcomes[i].coloring));
        break;
      case SearchOutcome::Result::Timeout:
        result.timeouts.push_back(n);
        break;
      case SearchOutcome::Result::None:
        break;
    }
  }
  return result;
}

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

const std::vector<ReferenceSpectrumRow>& three_atom_cyclic_spectra() {
  static const std::vector<ReferenceSpectrumRow> rows = {
      {"1_7", [](int n) { return n == 4; }},
      {"2_7", [](int n) { return n >= 6 && n % 2 == 0; }},
      {"3_7", [](int n) { return n >= 6 && n % 2 == 0; }},
      {"4_7",
       [](int n) {
         return n >= 9 && !is_prime(n) && !(n % 2 == 0 && is_prime(n / 2));
       }},
      {"5_7", [](int n) { return n == 5; }},
      {"6_7", [](int n) { return n == 8 || n >= 11; }},
      {"7_7", [](int n) { return n >= 12; }},
  };
  return rows;
}

TableMatchReport match_table(const std::vector<AtomStructure>& structures,
                             int n_max, const SearchConfig& cfg) {
  if (n_max < 2) throw Error("match_table: n_max must be at least 2");
  TableMatchReport report;
  report.n_max = n_max;

  // reference truncations
  std::vector<std::vector<int>> reference;
  for (const auto& row : three_atom_cyclic_spectra()) {
    std::vector<int> trunc;
    for (int n = 2; n <= n_max; ++n)
      if (row.contains(n)) trunc.push_back(n);
    reference.push_back(std::move(trunc));
  }

  std::vector<std::vector<int>> computed;
  for (const auto& s : structures) {
    auto spec = spectrum(s, 2, n_max, cfg);
    report.partial = report.partial || spec.partial();
    TableMatchRow row;
    row.structure_name = s.name();
    row.forbidden = s.forbidden();
    row.spectrum = spec.found;
    for (size_t r = 0; r < reference.size(); ++r)
      if (reference[r] == spec.found)
        row.matched_labels.push_back(three_atom_cyclic_spectra()[r].label);
    computed.push_back(spec.found);
    if (!spec.found.empty()) report.minima.push_back(spec.found.front());
    report.rows.push_back(std::move(row));
  }
  std::sort(report.minima.begin(), report.minima.end());

  auto sorted = [](std::vector<std::vector<int>> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  report.matches_reference =
      !report.partial && sorted(computed) == sorted(reference);
  return report;
}

std::string log_record(const std::string& algebra, const std::string& group_spec,
                       const SearchOutcome& outcome,
                       const std::string& certificate_path) {
  nlohmann::json j;
  j["algebra"] = algebra;
  j["group"] = group_spec;
  switch (outcome.result) {
    case SearchOutcome::Result::Found:
      j["verdict"] = "found";
      break;
    case SearchOutcome::Result::None:
      j["verdict"] = "none";
      break;
    case SearchOutcome::Result::Timeout:
      j["verdict"] = "timeout";
      break;
  }
  if (!certificate_path.empty())
    j["certificate"] = certificate_path;
  else
    j["certificate"] = nullptr;
  j["nodes"] = outcome.stats.nodes;
  j["wall_ms"] = outcome.stats.wall_sec * 1000.0;
  return j.dump();
}

}  // namespace relrep
