#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relrep/atoms.hpp"
#include "relrep/coloring.hpp"
#include "relrep/verify.hpp"

namespace relrep {

struct SearchConfig {
  enum class Engine { Backtrack, Sat };
  Engine engine = Engine::Backtrack;
  int parallel_width = 1;       // workers across moduli in spectrum/sweeps
  bool prune_multipliers = false;  // existence-only pruning, never certified unsat
  double time_budget_sec = 0;   // per group; 0 = unlimited
  std::string solver_cmd;       // external solver for the sat engine
  bool symmetry_break = false;  // sat engine only; existence-only
};

struct SearchStats {
  uint64_t nodes = 0;
  double wall_sec = 0;
};

struct SearchOutcome {
  enum class Result { Found, None, Timeout };
  Result result = Result::None;
  std::optional<Coloring> coloring;  // set iff Found; always re-verified
  SearchStats stats;
};

// Complete backtracking (or SAT-backed) search for a coloring of g's
// non-identity elements representing s. Inverse orbits are assigned in order
// of representative; atoms are tried in structure order; a None outcome is a
// certificate of non-existence (timeouts are reported as Timeout, never None).
SearchOutcome search_group(const AtomStructure& s, const FiniteGroup& g,
                           const SearchConfig& cfg = {});

struct SpectrumResult {
  int n_min = 0, n_max = 0;
  std::vector<int> found;                 // moduli with representations
  std::map<int, Coloring> certificates;   // per found modulus
  std::vector<int> timeouts;              // moduli whose search timed out
  std::map<int, SearchStats> stats;
  bool partial() const { return !timeouts.empty(); }
};

// { n in [n_min, n_max] : Z/n carries a representation of s }.
SpectrumResult spectrum(const AtomStructure& s, int n_min, int n_max,
                        const SearchConfig& cfg = {});

// Published cyclic spectra of the seven three-atom algebras, as membership
// tests keyed by the conventional labels 1_7..7_7.
struct ReferenceSpectrumRow {
  std::string label;
  bool (*contains)(int n);
};
const std::vector<ReferenceSpectrumRow>& three_atom_cyclic_spectra();

struct TableMatchRow {
  std::string structure_name;
  std::vector<DiversityCycle> forbidden;
  std::vector<int> spectrum;               // within [2, n_max]
  std::vector<std::string> matched_labels; // reference rows with equal truncation
};

struct TableMatchReport {
  int n_max = 0;
  std::vector<TableMatchRow> rows;
  std::vector<int> minima;     // sorted minima of the nonempty spectra
  bool matches_reference = false;  // multiset equality against the table
  bool partial = false;
};

// Computes the cyclic spectrum of each structure over [2, n_max] and pairs
// it against the reference table truncated identically. The pairing is
// computed, never assumed.
TableMatchReport match_table(const std::vector<AtomStructure>& structures,
                             int n_max, const SearchConfig& cfg = {});

// One line per modulus, appended to a results log.
std::string log_record(const std::string& algebra, const std::string& group_spec,
                       const SearchOutcome& outcome,
                       const std::string& certificate_path);

}  // namespace relrep
