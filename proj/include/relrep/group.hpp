#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "relrep/error.hpp"

namespace relrep {

// Finite group on dense indices 0..order-1 with the identity at 0.
// Operation and inverse are precomputed tables; immutable after construction.
class FiniteGroup {
 public:
  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric(int k);  // k in 1..5
  // Validates all group axioms exhaustively; re-indexes so the identity
  // lands at 0 if the table put it elsewhere.
  static FiniteGroup from_cayley_table(const std::vector<std::vector<int>>& table,
                                       std::string spec = "cayley");

  int order() const { return order_; }
  int op(int x, int y) const { return op_[x * order_ + y]; }
  int inv(int x) const { return inv_[x]; }

  // Group spec string: "zN", "sK", or "cayley:<path>".
  const std::string& spec() const { return spec_; }

  // True when indices add like Z/n, i.e. op(x,y) == (x+y) mod order.
  bool is_cyclic_addition() const { return cyclic_addition_; }

  bool same_tables(const FiniteGroup& other) const {
    return order_ == other.order_ && op_ == other.op_ && inv_ == other.inv_;
  }

 private:
  FiniteGroup(int order, std::vector<uint16_t> op, std::vector<uint16_t> inv,
              std::string spec);

  int order_ = 0;
  std::vector<uint16_t> op_;   // order*order
  std::vector<uint16_t> inv_;  // order
  std::string spec_;
  bool cyclic_addition_ = false;
};

// Orbit of a non-identity element under inversion: {x, inv(x)}.
struct InverseOrbit {
  int representative;         // smallest member
  std::array<int, 2> members; // members[1] == representative when a singleton
  int size;                   // 1 iff the representative is an involution
};

// Partition of the non-identity elements into inverse orbits, ordered by
// representative.
std::vector<InverseOrbit> inverse_orbits(const FiniteGroup& g);

// Cayley-table file: first line the order, then order lines of order
// space-separated indices.
FiniteGroup load_cayley_file(const std::filesystem::path& path);
void save_cayley_file(const FiniteGroup& g, const std::filesystem::path& path);

// "zN" (cyclic), "sK" (symmetric), "cayley:<path>".
FiniteGroup parse_group_spec(std::string_view spec);

}  // namespace relrep
