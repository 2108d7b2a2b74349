#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "relrep/group.hpp"

namespace relrep {

// Candidate representation: a partition of a group's non-identity elements
// into one class per diversity atom. Nothing about it is assumed valid;
// the checks in verify.hpp establish (or refute) the partition properties.
struct Coloring {
  FiniteGroup group;
  std::vector<std::string> atom_names;        // class keys
  std::vector<std::vector<int>> classes;      // aligned with atom_names, sorted

  int class_of(int element) const;            // index into atom_names, or -1
};

// Coloring file format: JSON object with fields "group" (spec string) and
// "classes" (map from atom name to array of element indices).
Coloring load_coloring_file(const std::filesystem::path& path);
void save_coloring_file(const Coloring& c, const std::filesystem::path& path);

}  // namespace relrep
