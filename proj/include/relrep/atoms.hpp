#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "relrep/error.hpp"

namespace relrep {

// Unordered triple of diversity atoms (indices into a structure's atom list),
// stored sorted. Equality is multiset equality: {c,b,b} == {b,b,c}.
struct DiversityCycle {
  std::array<int, 3> atoms{};

  static DiversityCycle of(int x, int y, int z);
  bool contains(int atom) const {
    return atoms[0] == atom || atoms[1] == atom || atoms[2] == atom;
  }
  auto operator<=>(const DiversityCycle&) const = default;
};

// Atom structure of a symmetric integral relation algebra: named diversity
// atoms plus the set of forbidden diversity cycles. The identity atom is
// implicit and never listed. Immutable after construction.
class AtomStructure {
 public:
  AtomStructure(std::string name, std::vector<std::string> atom_names,
                std::vector<DiversityCycle> forbidden);

  // Convenience constructor taking cycles as atom-name triples.
  static AtomStructure from_names(
      std::string name, std::vector<std::string> atom_names,
      const std::vector<std::array<std::string, 3>>& forbidden);

  const std::string& name() const { return name_; }
  int atom_count() const { return static_cast<int>(atom_names_.size()); }
  const std::vector<std::string>& atom_names() const { return atom_names_; }
  const std::string& atom_name(int i) const { return atom_names_.at(i); }
  int atom_index(std::string_view atom_name) const;  // throws Error

  // Sorted, duplicate-free.
  const std::vector<DiversityCycle>& forbidden() const { return forbidden_; }
  bool is_forbidden(const DiversityCycle& c) const;

  // All 3-multisets over the diversity atoms minus the forbidden ones.
  std::vector<DiversityCycle> allowed_cycles() const;

  // Atoms appearing in no forbidden cycle.
  std::vector<int> flexible_atoms() const;

 private:
  std::string name_;
  std::vector<std::string> atom_names_;
  std::vector<DiversityCycle> forbidden_;
};

// All 3-multisets over atoms 0..atom_count-1 in lexicographic order.
std::vector<DiversityCycle> all_cycles(int atom_count);

std::string cycle_to_string(const AtomStructure& s, const DiversityCycle& c);

struct ValidityIssue {
  enum class Kind { EmptyComposition, AssociativityFailure };
  Kind kind;
  int x = -1, y = -1, z = -1;  // atoms involved; z unused for EmptyComposition
};

struct ValidityReport {
  std::vector<ValidityIssue> issues;
  bool valid() const { return issues.empty(); }
  std::string summary(const AtomStructure& s) const;
};

// Accepts iff the complex algebra over the atoms is an integral relation
// algebra: every composition of diversity atoms is nonempty, and atom-level
// associativity holds with the identity absorbed (1';x = x;1' = x).
ValidityReport validate_ra(const AtomStructure& s);

// Relabeling of s whose sorted forbidden-cycle list is lexicographically
// minimal over all permutations of the diversity atoms. Idempotent; two
// structures are isomorphic iff their canonical forbidden lists are equal.
AtomStructure canonicalize(const AtomStructure& s);

// All isomorphism classes of valid structures on the given number of
// diversity atoms, each in canonical form, ordered lexicographically by
// forbidden list. Cost grows as 2^(#cycles); fine through 4 atoms.
std::vector<AtomStructure> enumerate_structures(int diversity_atoms,
                                                bool flexible_only = false);

struct CatalogEntry {
  AtomStructure structure;
  std::string provenance;
};

// Built-in algebras: 63_65, 57_65, 33_65.
const std::vector<CatalogEntry>& catalog();
const AtomStructure* find_in_catalog(std::string_view name);

// Algebra file format: JSON object with fields "name" (string),
// "diversity_atoms" (array of strings), "forbidden" (array of 3-element
// atom-name arrays).
AtomStructure load_algebra_file(const std::filesystem::path& path);
void save_algebra_file(const AtomStructure& s,
                       const std::filesystem::path& path);

// Catalog name, else a path to an algebra file.
AtomStructure resolve_algebra(std::string_view name_or_path);

}  // namespace relrep
