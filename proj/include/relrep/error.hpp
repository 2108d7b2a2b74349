#pragma once

#include <stdexcept>

namespace relrep {

// Input and contract errors: malformed files, unknown names, bad models.
// Semantic verdicts (invalid coloring, unsat, ...) are reports, not errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relrep
