#pragma once

#include <vector>

#include "relrep/atoms.hpp"
#include "relrep/coloring.hpp"
#include "relrep/verify.hpp"

// Independent search oracle: try every assignment of inverse orbits to
// atoms and ask the verifier. Exponential, test-only.
inline bool naive_representation_exists(const relrep::AtomStructure& s,
                                        const relrep::FiniteGroup& g) {
  const auto orbits = relrep::inverse_orbits(g);
  const int m = static_cast<int>(orbits.size());
  const int k = s.atom_count();
  std::vector<int> assignment(m, 0);
  for (;;) {
    relrep::Coloring c{g, s.atom_names(),
                       std::vector<std::vector<int>>(k)};
    for (int i = 0; i < m; ++i)
      for (int q = 0; q < orbits[i].size; ++q)
        c.classes[assignment[i]].push_back(orbits[i].members[q]);
    for (auto& cl : c.classes) std::sort(cl.begin(), cl.end());
    if (relrep::verify(s, c).valid) return true;

    int pos = m - 1;
    while (pos >= 0 && assignment[pos] == k - 1) assignment[pos--] = 0;
    if (pos < 0) return false;
    ++assignment[pos];
  }
}
