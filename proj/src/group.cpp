#include "relrep/group.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace relrep {

namespace {

constexpr int kMaxOrder = 4096;

void check_axioms(int n, const std::vector<uint16_t>& op) {
  // identity at 0
  for (int x = 0; x < n; ++x)
    if (op[0 * n + x] != x || op[x * n + 0] != x)
      throw Error("cayley table: index 0 is not a two-sided identity");
  // closure is implied by the value range check done by the caller
  // associativity
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (op[op[x * n + y] * n + z] != op[x * n + op[y * n + z]])
          throw Error("cayley table: not associative at (" + std::to_string(x) +
                      "," + std::to_string(y) + "," + std::to_string(z) + ")");
  // two-sided inverses
  for (int x = 0; x < n; ++x) {
    bool has = false;
    for (int y = 0; y < n; ++y)
      if (op[x * n + y] == 0 && op[y * n + x] == 0) has = true;
    if (!has) throw Error("cayley table: no inverse for " + std::to_string(x));
  }
}

std::vector<uint16_t> inverses_from_op(int n, const std::vector<uint16_t>& op) {
  std::vector<uint16_t> inv(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (op[x * n + y] == 0 && op[y * n + x] == 0) {
        inv[x] = static_cast<uint16_t>(y);
        break;
      }
  return inv;
}

}  // namespace

FiniteGroup::FiniteGroup(int order, std::vector<uint16_t> op,
                         std::vector<uint16_t> inv, std::string spec)
    : order_(order), op_(std::move(op)), inv_(std::move(inv)), spec_(std::move(spec)) {
  cyclic_addition_ = true;
  for (int x = 0; x < order_ && cyclic_addition_; ++x)
    for (int y = 0; y < order_; ++y)
      if (op_[x * order_ + y] != (x + y) % order_) {
        cyclic_addition_ = false;
        break;
      }
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error("cyclic group: order must be positive");
  if (n > kMaxOrder) throw Error("cyclic group: order too large");
  std::vector<uint16_t> op(size_t(n) * n), inv(n);
  for (int x = 0; x < n; ++x) {
    inv[x] = static_cast<uint16_t>((n - x) % n);
    for (int y = 0; y < n; ++y)
      op[x * n + y] = static_cast<uint16_t>((x + y) % n);
  }
  return FiniteGroup(n, std::move(op), std::move(inv), "z" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric(int k) {
  if (k < 1 || k > 5)
    throw Error("symmetric group: k must be in 1..5 (order bound 120)");
  // all permutations in lex order of one-line notation; identity is lex-first
  std::vector<std::vector<int>> perms;
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const int n = static_cast<int>(perms.size());

  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) index[perms[i]] = i;

  std::vector<uint16_t> op(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> comp(k);
      for (int v = 0; v < k; ++v) comp[v] = perms[i][perms[j][v]];
      op[i * n + j] = static_cast<uint16_t>(index.at(comp));
    }
  auto inv = inverses_from_op(n, op);
  return FiniteGroup(n, std::move(op), std::move(inv), "s" + std::to_string(k));
}

FiniteGroup FiniteGroup::from_cayley_table(
    const std::vector<std::vector<int>>& table, std::string spec) {
  const int n = static_cast<int>(table.size());
  if (n < 1) throw Error("cayley table: empty");
  if (n > kMaxOrder) throw Error("cayley table: order too large");
  for (const auto& row : table)
    if (static_cast<int>(row.size()) != n)
      throw Error("cayley table: not square");
  std::vector<uint16_t> op(size_t(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int v = table[x][y];
      if (v < 0 || v >= n)
        throw Error("cayley table: entry " + std::to_string(v) + " out of range");
      op[x * n + y] = static_cast<uint16_t>(v);
    }

  // locate the identity; re-index if it is not at 0
  int e = -1;
  for (int cand = 0; cand < n && e < 0; ++cand) {
    bool ok = true;
    for (int x = 0; x < n; ++x)
      if (op[cand * n + x] != x || op[x * n + cand] != x) {
        ok = false;
        break;
      }
    if (ok) e = cand;
  }
  if (e < 0) throw Error("cayley table: no two-sided identity");
  if (e != 0) {
    // swap labels 0 and e
    auto relabel = [&](int v) { return v == 0 ? e : (v == e ? 0 : v); };
    std::vector<uint16_t> re(size_t(n) * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        re[relabel(x) * n + relabel(y)] =
            static_cast<uint16_t>(relabel(op[x * n + y]));
    op = std::move(re);
  }

  check_axioms(n, op);
  auto inv = inverses_from_op(n, op);
  return FiniteGroup(n, std::move(op), std::move(inv), std::move(spec));
}

std::vector<InverseOrbit> inverse_orbits(const FiniteGroup& g) {
  std::vector<InverseOrbit> out;
  std::vector<char> seen(g.order(), 0);
  for (int x = 1; x < g.order(); ++x) {
    if (seen[x]) continue;
    int y = g.inv(x);
    seen[x] = seen[y] = 1;
    if (y == x)
      out.push_back({x, {x, x}, 1});
    else
      out.push_back({x, {x, y}, 2});
  }
  return out;
}

FiniteGroup load_cayley_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cayley file: " + path.string());
  int n = 0;
  if (!(in >> n) || n < 1)
    throw Error("cayley file " + path.string() + ": bad order line");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (!(in >> table[x][y]))
        throw Error("cayley file " + path.string() + ": truncated table");
  return FiniteGroup::from_cayley_table(table, "cayley:" + path.string());
}

void save_cayley_file(const FiniteGroup& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write cayley file: " + path.string());
  out << g.order() << "\n";
  for (int x = 0; x < g.order(); ++x) {
    for (int y = 0; y < g.order(); ++y) {
      if (y) out << ' ';
      out << g.op(x, y);
    }
    out << "\n";
  }
}

FiniteGroup parse_group_spec(std::string_view spec) {
  auto parse_int = [&](std::string_view text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw Error("bad group spec '" + std::string(spec) + "'");
    return value;
  };
  if (spec.size() >= 2 && spec[0] == 'z') return FiniteGroup::cyclic(parse_int(spec.substr(1)));
  if (spec.size() >= 2 && spec[0] == 's') return FiniteGroup::symmetric(parse_int(spec.substr(1)));
  constexpr std::string_view kCayley = "cayley:";
  if (spec.substr(0, kCayley.size()) == kCayley)
    return load_cayley_file(std::filesystem::path(std::string(spec.substr(kCayley.size()))));
  throw Error("bad group spec '" + std::string(spec) + "' (want zN, sK, or cayley:<path>)");
}

}  // namespace relrep
