#include "relrep/atoms.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace relrep {

DiversityCycle DiversityCycle::of(int x, int y, int z) {
  if (x < 0 || y < 0 || z < 0) throw Error("diversity cycle: negative atom index");
  DiversityCycle c{{x, y, z}};
  std::sort(c.atoms.begin(), c.atoms.end());
  return c;
}

AtomStructure::AtomStructure(std::string name,
                             std::vector<std::string> atom_names,
                             std::vector<DiversityCycle> forbidden)
    : name_(std::move(name)),
      atom_names_(std::move(atom_names)),
      forbidden_(std::move(forbidden)) {
  if (atom_names_.empty())
    throw Error("atom structure '" + name_ + "': needs at least one diversity atom");
  for (size_t i = 0; i < atom_names_.size(); ++i) {
    if (atom_names_[i].empty())
      throw Error("atom structure '" + name_ + "': empty atom name");
    for (size_t j = i + 1; j < atom_names_.size(); ++j)
      if (atom_names_[i] == atom_names_[j])
        throw Error("atom structure '" + name_ + "': duplicate atom name '" +
                    atom_names_[i] + "'");
  }
  const int k = atom_count();
  for (auto& c : forbidden_)
    for (int a : c.atoms)
      if (a < 0 || a >= k)
        throw Error("atom structure '" + name_ + "': cycle references atom index " +
                    std::to_string(a) + " out of range");
  std::sort(forbidden_.begin(), forbidden_.end());
  forbidden_.erase(std::unique(forbidden_.begin(), forbidden_.end()),
                   forbidden_.end());
}

AtomStructure AtomStructure::from_names(
    std::string name, std::vector<std::string> atom_names,
    const std::vector<std::array<std::string, 3>>& forbidden) {
  AtomStructure base(name, atom_names, {});
  std::vector<DiversityCycle> cycles;
  cycles.reserve(forbidden.size());
  for (const auto& f : forbidden)
    cycles.push_back(DiversityCycle::of(base.atom_index(f[0]),
                                        base.atom_index(f[1]),
                                        base.atom_index(f[2])));
  return AtomStructure(std::move(name), std::move(atom_names), std::move(cycles));
}

int AtomStructure::atom_index(std::string_view atom_name) const {
  for (size_t i = 0; i < atom_names_.size(); ++i)
    if (atom_names_[i] == atom_name) return static_cast<int>(i);
  throw Error("atom structure '" + name_ + "': unknown atom '" +
              std::string(atom_name) + "'");
}

bool AtomStructure::is_forbidden(const DiversityCycle& c) const {
  return std::binary_search(forbidden_.begin(), forbidden_.end(), c);
}

std::vector<DiversityCycle> AtomStructure::allowed_cycles() const {
  std::vector<DiversityCycle> out;
  for (const auto& c : all_cycles(atom_count()))
    if (!is_forbidden(c)) out.push_back(c);
  return out;
}

std::vector<int> AtomStructure::flexible_atoms() const {
  std::vector<int> out;
  for (int a = 0; a < atom_count(); ++a) {
    bool involved = false;
    for (const auto& c : forbidden_)
      if (c.contains(a)) {
        involved = true;
        break;
      }
    if (!involved) out.push_back(a);
  }
  return out;
}

std::vector<DiversityCycle> all_cycles(int atom_count) {
  std::vector<DiversityCycle> out;
  for (int x = 0; x < atom_count; ++x)
    for (int y = x; y < atom_count; ++y)
      for (int z = y; z < atom_count; ++z)
        out.push_back(DiversityCycle{{x, y, z}});
  return out;
}

std::string cycle_to_string(const AtomStructure& s, const DiversityCycle& c) {
  bool short_names = true;
  for (const auto& n : s.atom_names())
    if (n.size() != 1) short_names = false;
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (i > 0 && !short_names) out += ".";
    out += s.atom_name(c.atoms[i]);
  }
  return out;
}

std::string ValidityReport::summary(const AtomStructure& s) const {
  if (valid()) return "valid";
  std::ostringstream os;
  for (const auto& issue : issues) {
    if (issue.kind == ValidityIssue::Kind::EmptyComposition)
      os << "empty composition " << s.atom_name(issue.x) << ";"
         << s.atom_name(issue.y) << "\n";
    else
      os << "associativity fails at (" << s.atom_name(issue.x) << ","
         << s.atom_name(issue.y) << "," << s.atom_name(issue.z) << ")\n";
  }
  return os.str();
}

namespace {

// Atom sets as bitmasks; bit k (one past the diversity atoms) is the identity.
using AtomSet = uint64_t;

struct CompositionTable {
  int k;
  AtomSet identity_bit;
  std::vector<AtomSet> div;  // k*k entries: diversity part of x;y

  AtomSet full(int x, int y) const {
    return div[x * k + y] | (x == y ? identity_bit : 0);
  }
};

CompositionTable composition_table(const AtomStructure& s) {
  const int k = s.atom_count();
  if (k > 60) throw Error("validate_ra: too many atoms");
  CompositionTable t{k, AtomSet(1) << k, std::vector<AtomSet>(k * k, 0)};
  for (int x = 0; x < k; ++x)
    for (int y = x; y < k; ++y) {
      AtomSet bits = 0;
      for (int w = 0; w < k; ++w)
        if (!s.is_forbidden(DiversityCycle::of(x, y, w))) bits |= AtomSet(1) << w;
      t.div[x * k + y] = bits;
      t.div[y * k + x] = bits;
    }
  return t;
}

// Union of w;z over w in the atom set `left` (identity absorbed: 1';z = z).
AtomSet compose_set_right(const CompositionTable& t, AtomSet left, int z) {
  AtomSet out = 0;
  if (left & t.identity_bit) out |= AtomSet(1) << z;
  AtomSet rest = left & ~t.identity_bit;
  while (rest) {
    int w = std::countr_zero(rest);
    rest &= rest - 1;
    out |= t.full(w, z);
  }
  return out;
}

AtomSet compose_set_left(const CompositionTable& t, int x, AtomSet right) {
  AtomSet out = 0;
  if (right & t.identity_bit) out |= AtomSet(1) << x;
  AtomSet rest = right & ~t.identity_bit;
  while (rest) {
    int w = std::countr_zero(rest);
    rest &= rest - 1;
    out |= t.full(x, w);
  }
  return out;
}

}  // namespace

ValidityReport validate_ra(const AtomStructure& s) {
  const int k = s.atom_count();
  const CompositionTable t = composition_table(s);
  ValidityReport report;

  // Integrality: x;y nonempty for every pair of diversity atoms. For x == y
  // the identity is always present, so only distinct pairs can fail.
  for (int x = 0; x < k; ++x)
    for (int y = x + 1; y < k; ++y)
      if (t.div[x * k + y] == 0)
        report.issues.push_back(
            {ValidityIssue::Kind::EmptyComposition, x, y, -1});

  // Atom-level associativity: (x;y);z == x;(y;z) for all diversity triples.
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      for (int z = 0; z < k; ++z) {
        AtomSet lhs = compose_set_right(t, t.full(x, y), z);
        AtomSet rhs = compose_set_left(t, x, t.full(y, z));
        if (lhs != rhs)
          report.issues.push_back(
              {ValidityIssue::Kind::AssociativityFailure, x, y, z});
      }
  return report;
}

AtomStructure canonicalize(const AtomStructure& s) {
  const int k = s.atom_count();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<DiversityCycle> best = s.forbidden();
  do {
    std::vector<DiversityCycle> mapped;
    mapped.reserve(s.forbidden().size());
    for (const auto& c : s.forbidden())
      mapped.push_back(
          DiversityCycle::of(perm[c.atoms[0]], perm[c.atoms[1]], perm[c.atoms[2]]));
    std::sort(mapped.begin(), mapped.end());
    if (mapped < best) best = std::move(mapped);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return AtomStructure(s.name(), s.atom_names(), std::move(best));
}

namespace {

std::vector<std::string> default_atom_names(int k) {
  std::vector<std::string> names;
  if (k > 26) throw Error("enumerate_structures: more than 26 atoms unsupported");
  for (int i = 0; i < k; ++i) names.push_back(std::string(1, char('a' + i)));
  return names;
}

std::vector<int> mask_to_indices(uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

// Lex comparison of forbidden sets viewed as ascending index lists.
bool mask_lex_less(uint64_t a, uint64_t b) {
  return mask_to_indices(a) < mask_to_indices(b);
}

}  // namespace

std::vector<AtomStructure> enumerate_structures(int diversity_atoms,
                                                bool flexible_only) {
  const int k = diversity_atoms;
  if (k < 1) throw Error("enumerate_structures: need at least one diversity atom");
  const auto cycles = all_cycles(k);
  const int nc = static_cast<int>(cycles.size());
  if (nc > 40) throw Error("enumerate_structures: too many atoms");

  // cycle index lookup and per-pair composition entries
  std::map<DiversityCycle, int> cycle_index;
  for (int i = 0; i < nc; ++i) cycle_index[cycles[i]] = i;
  // entries[x*k+y] = list of (cycle index, third atom)
  std::vector<std::vector<std::pair<int, int>>> entries(k * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      for (int w = 0; w < k; ++w)
        entries[x * k + y].push_back({cycle_index[DiversityCycle::of(x, y, w)], w});

  // permutation action on cycle indices
  std::vector<std::vector<int>> perm_act;
  {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<int> act(nc);
      for (int i = 0; i < nc; ++i)
        act[i] = cycle_index[DiversityCycle::of(perm[cycles[i].atoms[0]],
                                                perm[cycles[i].atoms[1]],
                                                perm[cycles[i].atoms[2]])];
      perm_act.push_back(std::move(act));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // atom membership masks, for the flexible-atom filter
  std::vector<uint64_t> atom_cycles(k, 0);
  for (int i = 0; i < nc; ++i)
    for (int a = 0; a < k; ++a)
      if (cycles[i].contains(a)) atom_cycles[a] |= uint64_t(1) << i;

  const AtomSet id_bit = AtomSet(1) << k;
  std::vector<AtomSet> div(k * k);
  std::vector<uint64_t> survivors;

  const uint64_t total = uint64_t(1) << nc;
  for (uint64_t forbidden_mask = 0; forbidden_mask < total; ++forbidden_mask) {
    // diversity compositions under this forbidden set
    bool integral = true;
    for (int x = 0; x < k && integral; ++x)
      for (int y = x; y < k; ++y) {
        AtomSet bits = 0;
        for (const auto& [ci, w] : entries[x * k + y])
          if (!(forbidden_mask >> ci & 1)) bits |= AtomSet(1) << w;
        div[x * k + y] = bits;
        div[y * k + x] = bits;
        if (x != y && bits == 0) {
          integral = false;
          break;
        }
      }
    if (!integral) continue;

    CompositionTable t{k, id_bit, div};
    bool assoc = true;
    for (int x = 0; x < k && assoc; ++x)
      for (int y = 0; y < k && assoc; ++y)
        for (int z = 0; z < k; ++z)
          if (compose_set_right(t, t.full(x, y), z) !=
              compose_set_left(t, x, t.full(y, z))) {
            assoc = false;
            break;
          }
    if (!assoc) continue;

    if (flexible_only) {
      bool has_flexible = false;
      for (int a = 0; a < k; ++a)
        if ((forbidden_mask & atom_cycles[a]) == 0) {
          has_flexible = true;
          break;
        }
      if (!has_flexible) continue;
    }

    // keep one representative per isomorphism class: the lex-minimal image
    bool self_canonical = true;
    for (const auto& act : perm_act) {
      uint64_t image = 0;
      uint64_t rest = forbidden_mask;
      while (rest) {
        image |= uint64_t(1) << act[std::countr_zero(rest)];
        rest &= rest - 1;
      }
      if (mask_lex_less(image, forbidden_mask)) {
        self_canonical = false;
        break;
      }
    }
    if (self_canonical) survivors.push_back(forbidden_mask);
  }

  std::sort(survivors.begin(), survivors.end(), mask_lex_less);

  std::vector<AtomStructure> out;
  out.reserve(survivors.size());
  const auto names = default_atom_names(k);
  for (size_t i = 0; i < survivors.size(); ++i) {
    std::vector<DiversityCycle> forb;
    for (int ci : mask_to_indices(survivors[i])) forb.push_back(cycles[ci]);
    std::string name = "enum" + std::to_string(k) + "." + std::to_string(i + 1);
    out.emplace_back(std::move(name), names, std::move(forb));
  }
  return out;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    v.push_back({AtomStructure::from_names(
                     "63_65", {"a", "b", "c"},
                     {{{"b", "b", "b"}}, {{"c", "c", "c"}}}),
                 "Maddux catalog; symmetric integral RA on atoms 1',a,b,c; "
                 "cyclic representation known over Z/29"});
    v.push_back({AtomStructure::from_names(
                     "57_65", {"a", "b", "c"},
                     {{{"c", "c", "c"}}, {{"c", "b", "b"}}}),
                 "Maddux catalog; symmetric integral RA on atoms 1',a,b,c; "
                 "cyclic representation known over Z/46"});
    v.push_back({AtomStructure::from_names(
                     "33_65", {"a", "b", "c"},
                     {{{"c", "c", "c"}}, {{"b", "c", "c"}}, {{"c", "b", "b"}}}),
                 "Maddux catalog; symmetric integral RA on atoms 1',a,b,c; "
                 "no finite representation known"});
    return v;
  }();
  return entries;
}

const AtomStructure* find_in_catalog(std::string_view name) {
  for (const auto& e : catalog())
    if (e.structure.name() == name) return &e.structure;
  return nullptr;
}

AtomStructure load_algebra_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open algebra file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("algebra file " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j.contains("diversity_atoms") ||
      !j.contains("forbidden"))
    throw Error("algebra file " + path.string() +
                ": expected fields name, diversity_atoms, forbidden");
  try {
    std::string name = j.at("name").get<std::string>();
    std::vector<std::string> atoms =
        j.at("diversity_atoms").get<std::vector<std::string>>();
    std::vector<std::array<std::string, 3>> forbidden;
    for (const auto& f : j.at("forbidden")) {
      if (!f.is_array() || f.size() != 3)
        throw Error("algebra file " + path.string() +
                    ": forbidden cycles must be 3-element arrays");
      forbidden.push_back({f[0].get<std::string>(), f[1].get<std::string>(),
                           f[2].get<std::string>()});
    }
    return AtomStructure::from_names(std::move(name), std::move(atoms), forbidden);
  } catch (const nlohmann::json::exception& e) {
    throw Error("algebra file " + path.string() + ": " + e.what());
  }
}

void save_algebra_file(const AtomStructure& s,
                       const std::filesystem::path& path) {
  nlohmann::json j;
  j["name"] = s.name();
  j["diversity_atoms"] = s.atom_names();
  auto forb = nlohmann::json::array();
  for (const auto& c : s.forbidden()) {
    auto arr = nlohmann::json::array();
    for (int a : c.atoms) arr.push_back(s.atom_name(a));
    forb.push_back(arr);
  }
  j["forbidden"] = forb;
  std::ofstream out(path);
  if (!out) throw Error("cannot write algebra file: " + path.string());
  out << j.dump(2) << "\n";
}

AtomStructure resolve_algebra(std::string_view name_or_path) {
  if (const AtomStructure* s = find_in_catalog(name_or_path)) return *s;
  std::filesystem::path p{std::string(name_or_path)};
  if (std::filesystem::exists(p)) return load_algebra_file(p);
  throw Error("unknown algebra '" + std::string(name_or_path) +
              "': not a catalog name and not a file");
}

}  // namespace relrep
