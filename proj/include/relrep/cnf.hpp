#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relrep/atoms.hpp"
#include "relrep/coloring.hpp"

namespace relrep {

// Variable layout for "s has a representation over Z/n". Color variables
// live on inverse orbits: v(orbit, atom) is true iff both orbit members
// carry that atom. Auxiliary pair variables d(y,i,z,j) assert y in class(i)
// and z in class(j); they are shared across all clauses referencing the
// same tuple, and their ids follow all color ids.
struct VarMap {
  int n = 0;
  int atom_count = 0;
  std::string algebra;
  std::vector<std::string> atom_names;
  std::vector<int> orbit_reps;  // orbit index -> representative element

  struct AuxKey {
    int y, i, z, j;
    auto operator<=>(const AuxKey&) const = default;
  };
  std::vector<std::pair<AuxKey, int>> aux;  // in id order

  int color_var(int orbit, int atom) const {
    return orbit * atom_count + atom + 1;
  }
  int color_var_count() const {
    return static_cast<int>(orbit_reps.size()) * atom_count;
  }
  int orbit_of(int element) const;  // orbit index for a non-identity element
};

struct CnfStats {
  size_t at_least_one = 0;
  size_t at_most_one = 0;
  size_t forbidden = 0;
  size_t mandatory = 0;
  size_t defining = 0;
  size_t nonempty = 0;
  size_t symmetry = 0;
  size_t duplicates_dropped = 0;
};

struct CnfInstance {
  int var_count = 0;
  std::vector<std::vector<int>> clauses;  // signed DIMACS literals
  VarMap map;
  CnfStats stats;
};

// CNF for "s has a representation over Z/n". Clauses: exactly-one atom per
// orbit, forbidden-cycle exclusion over all ordered element pairs and
// ordered atom assignments, witness clauses for every allowed cycle at
// every element, and per-atom nonemptiness. Literally identical clauses are
// emitted once. With symmetry_break (existence-only), the orbit of 1 is
// pinned to the first atom when n is prime.
CnfInstance encode(const AtomStructure& s, int n, bool symmetry_break = false);

// DIMACS file plus a sidecar variable map ("v <id> <orbit-rep> <atom>" then
// "d <id> <y> <atom> <z> <atom>"). Byte-stable across runs.
void emit_dimacs(const CnfInstance& inst, const std::filesystem::path& cnf_path,
                 const std::filesystem::path& map_path);

// Clause list from a DIMACS file (comments skipped).
struct ParsedCnf {
  int var_count = 0;
  std::vector<std::vector<int>> clauses;
};
ParsedCnf parse_dimacs(const std::filesystem::path& cnf_path);

VarMap load_var_map(const std::filesystem::path& map_path,
                    const AtomStructure& s, int n);

// Expands a model's orbit colors to element classes. Requires exactly one
// true color variable per orbit.
Coloring decode(const VarMap& map, const std::set<int>& true_vars,
                const AtomStructure& s, int n);
Coloring decode(const std::filesystem::path& map_path,
                const std::set<int>& true_vars, const AtomStructure& s, int n);

struct SolveOutcome {
  enum class Status { Sat, Unsat, Timeout, Error };
  Status status = Status::Error;
  std::optional<Coloring> coloring;  // set iff Sat; already re-verified
  std::string message;               // diagnostic for Error
};

// Runs `solver_cmd <cnf-file>` in a scratch directory and parses the
// standard "s SATISFIABLE/UNSATISFIABLE" and "v ..." output. Sat models are
// decoded and re-verified before being reported; any claim that fails
// verification comes back as Error, never as a silent Sat.
SolveOutcome solve_external(const CnfInstance& inst, const AtomStructure& s,
                            const std::string& solver_cmd,
                            double time_budget_sec = 0);

// Model literals (positive ids) from solver "v" lines.
std::set<int> parse_model_lines(const std::string& solver_output);

}  // namespace relrep
