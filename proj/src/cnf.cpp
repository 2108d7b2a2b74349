#include "relrep/cnf.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "process.hpp"
#include "relrep/verify.hpp"

namespace relrep {

int VarMap::orbit_of(int element) const {
  if (element <= 0 || element >= n)
    throw Error("orbit_of: element " + std::to_string(element) +
                " outside 1.." + std::to_string(n - 1));
  return std::min(element, n - element) - 1;
}

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Clause accumulator with in-clause duplicate collapse and global dedup of
// literally identical clauses (first-encounter literal order is kept).
struct ClauseSink {
  std::vector<std::vector<int>>& clauses;
  CnfStats& stats;
  std::set<std::vector<int>> seen;

  bool add(std::vector<int> lits, size_t CnfStats::*category) {
    std::vector<int> unique;
    for (int l : lits) {
      if (l == 0) throw std::logic_error("zero literal in clause");
      if (std::find(unique.begin(), unique.end(), l) == unique.end())
        unique.push_back(l);
      if (std::find(unique.begin(), unique.end(), -l) != unique.end())
        throw std::logic_error("complementary literals in clause");
    }
    if (unique.empty()) throw std::logic_error("empty clause");
    std::vector<int> key = unique;
    std::sort(key.begin(), key.end());
    if (!seen.insert(std::move(key)).second) {
      ++stats.duplicates_dropped;
      return false;
    }
    clauses.push_back(std::move(unique));
    ++(stats.*category);
    return true;
  }
};

// Distinct ordered (i,j,k) triples forming the multiset, in lex order.
std::vector<std::array<int, 3>> ordered_assignments(const DiversityCycle& c) {
  std::array<int, 3> a = c.atoms;
  std::vector<std::array<int, 3>> out;
  std::sort(a.begin(), a.end());
  do {
    out.push_back(a);
  } while (std::next_permutation(a.begin(), a.end()));
  return out;
}

}  // namespace

CnfInstance encode(const AtomStructure& s, int n, bool symmetry_break) {
  if (n < 2) throw Error("encode: modulus must be at least 2");
  if (!validate_ra(s).valid())
    throw Error("encode: algebra '" + s.name() + "' is not a valid integral RA");
  const int k = s.atom_count();
  const int m = n / 2;  // inverse orbits of Z/n
  if (m < k)
    throw Error("encode: fewer inverse orbits (" + std::to_string(m) +
                ") than atoms (" + std::to_string(k) + ")");

  CnfInstance inst;
  inst.map.n = n;
  inst.map.atom_count = k;
  inst.map.atom_names = s.atom_names();
  inst.map.algebra = s.name();
  for (int r = 1; r <= m; ++r) inst.map.orbit_reps.push_back(r);

  const VarMap& vm = inst.map;
  ClauseSink sink{inst.clauses, inst.stats, {}};

  // (1) exactly one atom per orbit
  for (int o = 0; o < m; ++o) {
    std::vector<int> alo;
    for (int t = 0; t < k; ++t) alo.push_back(vm.color_var(o, t));
    sink.add(std::move(alo), &CnfStats::at_least_one);
    for (int t1 = 0; t1 < k; ++t1)
      for (int t2 = t1 + 1; t2 < k; ++t2)
        sink.add({-vm.color_var(o, t1), -vm.color_var(o, t2)},
                 &CnfStats::at_most_one);
  }

  // (2) forbidden cycles: no ordered pair may realize any ordered assignment
  for (const auto& cycle : s.forbidden()) {
    const auto assignments = ordered_assignments(cycle);
    for (int y = 1; y < n; ++y)
      for (int z = 1; z < n; ++z) {
        const int x = (y + z) % n;
        if (x == 0) continue;
        for (const auto& [i, j, kk] : assignments)
          sink.add({-vm.color_var(vm.orbit_of(y), i),
                    -vm.color_var(vm.orbit_of(z), j),
                    -vm.color_var(vm.orbit_of(x), kk)},
                   &CnfStats::forbidden);
      }
  }

  // (3) mandatory witnesses, with shared auxiliary pair variables
  std::map<VarMap::AuxKey, int> aux_ids;
  int next_var = vm.color_var_count() + 1;
  for (const auto& cycle : s.allowed_cycles()) {
    for (int pos = 0; pos < 3; ++pos) {
      const int target = cycle.atoms[pos];
      if (pos > 0 && target == cycle.atoms[pos - 1]) continue;
      std::array<int, 2> flank{};
      int w = 0;
      for (int q = 0; q < 3; ++q)
        if (q != pos) flank[w++] = cycle.atoms[q];
      const int fi = flank[0], fj = flank[1];

      for (int x = 1; x < n; ++x) {
        std::vector<int> clause{-vm.color_var(vm.orbit_of(x), target)};
        std::vector<VarMap::AuxKey> fresh;
        for (int y = 1; y < n; ++y) {
          const int z = (x - y + n) % n;  // y + z = x
          if (z == 0) continue;
          VarMap::AuxKey key{y, fi, z, fj};
          auto it = aux_ids.find(key);
          int id;
          if (it == aux_ids.end()) {
            id = next_var++;
            aux_ids.emplace(key, id);
            inst.map.aux.push_back({key, id});
            fresh.push_back(key);
          } else {
            id = it->second;
          }
          clause.push_back(id);
        }
        sink.add(std::move(clause), &CnfStats::mandatory);
        for (const auto& key : fresh) {
          const int id = aux_ids.at(key);
          sink.add({-id, vm.color_var(vm.orbit_of(key.y), key.i)},
                   &CnfStats::defining);
          sink.add({-id, vm.color_var(vm.orbit_of(key.z), key.j)},
                   &CnfStats::defining);
        }
      }
    }
  }

  // (4) every class nonempty
  for (int t = 0; t < k; ++t) {
    std::vector<int> clause;
    for (int o = 0; o < m; ++o) clause.push_back(vm.color_var(o, t));
    sink.add(std::move(clause), &CnfStats::nonempty);
  }

  // optional existence-only symmetry breaking: pin the orbit of 1 when every
  // nonzero element is a unit
  if (symmetry_break && is_prime(n))
    sink.add({vm.color_var(vm.orbit_of(1), 0)}, &CnfStats::symmetry);

  inst.var_count = next_var - 1;
  return inst;
}

void emit_dimacs(const CnfInstance& inst, const std::filesystem::path& cnf_path,
                 const std::filesystem::path& map_path) {
  {
    std::ofstream out(cnf_path);
    if (!out) throw Error("cannot write cnf file: " + cnf_path.string());
    out << "c relrep algebra=" << inst.map.algebra << " n=" << inst.map.n << "\n";
    out << "p cnf " << inst.var_count << " " << inst.clauses.size() << "\n";
    for (const auto& clause : inst.clauses) {
      for (int lit : clause) out << lit << ' ';
      out << "0\n";
    }
    if (!out) throw Error("write failed: " + cnf_path.string());
  }
  {
    std::ofstream out(map_path);
    if (!out) throw Error("cannot write map file: " + map_path.string());
    const VarMap& vm = inst.map;
    for (size_t o = 0; o < vm.orbit_reps.size(); ++o)
      for (int t = 0; t < vm.atom_count; ++t)
        out << "v " << vm.color_var(static_cast<int>(o), t) << " "
            << vm.orbit_reps[o] << " " << vm.atom_names[t] << "\n";
    for (const auto& [key, id] : vm.aux)
      out << "d " << id << " " << key.y << " " << vm.atom_names[key.i] << " "
          << key.z << " " << vm.atom_names[key.j] << "\n";
    if (!out) throw Error("write failed: " + map_path.string());
  }
}

ParsedCnf parse_dimacs(const std::filesystem::path& cnf_path) {
  std::ifstream in(cnf_path);
  if (!in) throw Error("cannot open cnf file: " + cnf_path.string());
  ParsedCnf parsed;
  std::string line;
  long declared_clauses = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> parsed.var_count >> declared_clauses;
      if (fmt != "cnf") throw Error("not a DIMACS cnf file: " + cnf_path.string());
      continue;
    }
    std::vector<int> clause;
    int lit;
    while (ls >> lit) {
      if (lit == 0) break;
      clause.push_back(lit);
    }
    if (!clause.empty()) parsed.clauses.push_back(std::move(clause));
  }
  if (declared_clauses >= 0 &&
      declared_clauses != static_cast<long>(parsed.clauses.size()))
    throw Error("cnf file " + cnf_path.string() + ": clause count mismatch");
  return parsed;
}

VarMap load_var_map(const std::filesystem::path& map_path,
                    const AtomStructure& s, int n) {
  std::ifstream in(map_path);
  if (!in) throw Error("cannot open map file: " + map_path.string());
  VarMap vm;
  vm.n = n;
  vm.atom_count = s.atom_count();
  vm.atom_names = s.atom_names();
  vm.algebra = s.name();

  std::map<int, std::pair<int, int>> color_lines;  // id -> (rep, atom)
  std::string kind;
  while (in >> kind) {
    if (kind == "v") {
      int id, rep;
      std::string atom;
      if (!(in >> id >> rep >> atom))
        throw Error("map file " + map_path.string() + ": bad v line");
      color_lines[id] = {rep, s.atom_index(atom)};
    } else if (kind == "d") {
      int id, y, z;
      std::string ai, aj;
      if (!(in >> id >> y >> ai >> z >> aj))
        throw Error("map file " + map_path.string() + ": bad d line");
      vm.aux.push_back({{y, s.atom_index(ai), z, s.atom_index(aj)}, id});
    } else {
      throw Error("map file " + map_path.string() + ": unknown line kind '" +
                  kind + "'");
    }
  }

  // reconstruct orbit reps from the dense color-variable layout
  const int k = vm.atom_count;
  if (color_lines.empty() || color_lines.size() % k != 0)
    throw Error("map file " + map_path.string() + ": incomplete color variables");
  const int m = static_cast<int>(color_lines.size()) / k;
  vm.orbit_reps.assign(m, 0);
  for (const auto& [id, line] : color_lines) {
    const auto& [rep, atom] = line;
    if (id < 1 || id > m * k)
      throw Error("map file " + map_path.string() + ": color id out of range");
    const int orbit = (id - 1) / k;
    if ((id - 1) % k != atom || vm.color_var(orbit, atom) != id)
      throw Error("map file " + map_path.string() + ": non-dense color layout");
    vm.orbit_reps[orbit] = rep;
  }
  return vm;
}

Coloring decode(const VarMap& vm, const std::set<int>& true_vars,
                const AtomStructure& s, int n) {
  if (vm.n != n) throw Error("decode: map is for n=" + std::to_string(vm.n));
  const int k = s.atom_count();
  if (vm.atom_count != k || vm.atom_names != s.atom_names())
    throw Error("decode: map does not match algebra '" + s.name() + "'");

  Coloring c{FiniteGroup::cyclic(n), s.atom_names(),
             std::vector<std::vector<int>>(k)};
  for (size_t o = 0; o < vm.orbit_reps.size(); ++o) {
    int chosen = -1;
    for (int t = 0; t < k; ++t) {
      if (!true_vars.count(vm.color_var(static_cast<int>(o), t))) continue;
      if (chosen >= 0)
        throw Error("malformed model: orbit of " +
                    std::to_string(vm.orbit_reps[o]) +
                    " has more than one color");
      chosen = t;
    }
    if (chosen < 0)
      throw Error("malformed model: orbit of " +
                  std::to_string(vm.orbit_reps[o]) + " has no color");
    const int rep = vm.orbit_reps[o];
    c.classes[chosen].push_back(rep);
    if ((n - rep) % n != rep) c.classes[chosen].push_back(n - rep);
  }
  for (auto& cl : c.classes) std::sort(cl.begin(), cl.end());
  return c;
}

Coloring decode(const std::filesystem::path& map_path,
                const std::set<int>& true_vars, const AtomStructure& s, int n) {
  return decode(load_var_map(map_path, s, n), true_vars, s, n);
}

std::set<int> parse_model_lines(const std::string& solver_output) {
  std::set<int> model;
  std::istringstream in(solver_output);
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() < 2 || line[0] != 'v' || !isspace(line[1])) continue;
    std::istringstream ls(line.substr(1));
    long lit;
    while (ls >> lit)
      if (lit > 0) model.insert(static_cast<int>(lit));
  }
  return model;
}

SolveOutcome solve_external(const CnfInstance& inst, const AtomStructure& s,
                            const std::string& solver_cmd,
                            double time_budget_sec) {
  SolveOutcome out;
  auto argv = split_command(solver_cmd);
  if (argv.empty()) {
    out.message = "empty solver command";
    return out;
  }

  namespace fs = std::filesystem;
  std::string tmpl = (fs::temp_directory_path() / "relrep-sat-XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) {
    out.message = "cannot create scratch directory";
    return out;
  }
  fs::path dir(buf.data());
  fs::path cnf_path = dir / "instance.cnf";
  fs::path map_path = dir / "instance.map";
  emit_dimacs(inst, cnf_path, map_path);

  argv.push_back(cnf_path.string());
  ProcessResult proc = run_process(argv, time_budget_sec);

  std::error_code ec;
  auto cleanup = [&] { fs::remove_all(dir, ec); };

  if (proc.spawn_failed) {
    out.message = "cannot run solver '" + solver_cmd + "'";
    cleanup();
    return out;
  }
  if (proc.timed_out) {
    out.status = SolveOutcome::Status::Timeout;
    cleanup();
    return out;
  }

  bool sat_line = proc.output.find("\ns SATISFIABLE") != std::string::npos ||
                  proc.output.rfind("s SATISFIABLE", 0) == 0;
  bool unsat_line = proc.output.find("\ns UNSATISFIABLE") != std::string::npos ||
                    proc.output.rfind("s UNSATISFIABLE", 0) == 0;
  if (sat_line == unsat_line) {
    out.message = "solver produced no verdict (exit " +
                  std::to_string(proc.exit_code) + "): " +
                  proc.output.substr(0, 200);
    cleanup();
    return out;
  }
  if (unsat_line) {
    out.status = SolveOutcome::Status::Unsat;
    cleanup();
    return out;
  }

  try {
    Coloring c = decode(inst.map, parse_model_lines(proc.output), s, inst.map.n);
    auto report = verify(s, c);
    if (!report.valid) {
      out.message = "solver model decodes to a coloring that fails verification";
      cleanup();
      return out;
    }
    out.status = SolveOutcome::Status::Sat;
    out.coloring = std::move(c);
  } catch (const Error& e) {
    out.message = e.what();
  }
  cleanup();
  return out;
}

}  // namespace relrep
