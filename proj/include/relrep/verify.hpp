#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "relrep/atoms.hpp"
#include "relrep/coloring.hpp"

namespace relrep {

enum class ViolationKind {
  NotPartition,          // element missing from all classes or in several
  EmptyClass,
  NotInverseClosed,      // element's inverse is not in the same class
  ForbiddenWitnessed,    // forbidden cycle realized by op(y,z) = x
  MandatoryUnwitnessed,  // allowed cycle lacks a witness at some element
};

// Every violation pins the elements and cycle involved, so it can be
// re-checked directly against the group tables.
struct Violation {
  ViolationKind kind;
  int element = -1;            // NotInverseClosed / MandatoryUnwitnessed / NotPartition
  int atom = -1;               // class index (by coloring order)
  std::vector<int> assigned_to;  // NotPartition: all classes holding element
  DiversityCycle cycle{};      // ForbiddenWitnessed / MandatoryUnwitnessed
  std::string cycle_text;      // rendered atom names for the cycle
  int y = -1, z = -1, result = -1;  // ForbiddenWitnessed: op(y,z) = result
  int target_atom = -1;        // MandatoryUnwitnessed: structure atom index
  std::string target_text;     // rendered target atom name

  std::string describe(const Coloring& c) const;
};

struct VerificationReport {
  bool valid = false;
  std::vector<Violation> violations;
};

struct CheckOptions {
  size_t max_violations = 10000;
};

// Partition checks: coverage, disjointness, nonemptiness, inverse closure.
std::vector<Violation> check_partition(const Coloring& c, CheckOptions opt = {});

// For each forbidden multiset {i,j,k}, reports every pair y in class(i),
// z in class(j) with op(y,z) in class(k). One orientation per multiset is
// scanned; emptiness is orientation-invariant for inverse-closed classes.
// Requires a clean partition and class keys matching s.
std::vector<Violation> check_forbidden(const AtomStructure& s, const Coloring& c,
                                       CheckOptions opt = {});

// For each allowed multiset, each distinct target atom k with flanks (i,j),
// and every x in class(k): requires some y in class(i), z in class(j) with
// op(y,z) = x. Requires a clean partition and class keys matching s.
std::vector<Violation> check_mandatory(const AtomStructure& s, const Coloring& c,
                                       CheckOptions opt = {});

// Full verdict: partition first, then (only if clean) forbidden + mandatory.
// Throws Error when the coloring's class keys do not exactly match the
// structure's diversity atoms, or when s itself is not a valid RA.
VerificationReport verify(const AtomStructure& s, const Coloring& c,
                          CheckOptions opt = {});

// Per-class clique bound: forbid a monochromatic complete subgraph on
// `bound` vertices in the circulant graph of that class.
struct RamseyBounds {
  std::vector<std::pair<std::string, int>> bounds;  // atom name -> t (>= 3)
};

struct RamseyResult {
  struct PerClass {
    std::string atom;
    int bound;
    bool clique_free;
    std::vector<int> clique;  // witness vertices when found
  };
  std::vector<PerClass> classes;
  bool clique_free() const {
    for (const auto& c : classes)
      if (!c.clique_free) return false;
    return true;
  }
};

// Clique search on the coloring viewed as an edge coloring of the complete
// graph on Z/n (edge {u,v} carries the class of v-u). Cyclic groups only.
RamseyResult ramsey_check(const Coloring& c, const RamseyBounds& bounds);

}  // namespace relrep
