#include "relrep/verify.hpp"

#include <algorithm>
#include <sstream>

namespace relrep {

namespace {

void require_elements_in_range(const Coloring& c) {
  for (size_t t = 0; t < c.classes.size(); ++t)
    for (int x : c.classes[t])
      if (x <= 0 || x >= c.group.order())
        throw Error("coloring class '" + c.atom_names[t] + "' holds element " +
                    std::to_string(x) + " outside 1.." +
                    std::to_string(c.group.order() - 1));
}

// class index per element: -1 unassigned, -2 multiply assigned
std::vector<int> element_classes(const Coloring& c) {
  require_elements_in_range(c);
  std::vector<int> cls(c.group.order(), -1);
  for (size_t t = 0; t < c.classes.size(); ++t)
    for (int x : c.classes[t]) {
      if (cls[x] == -1)
        cls[x] = static_cast<int>(t);
      else
        cls[x] = -2;
    }
  return cls;
}

// Maps structure atom -> coloring class index. Requires an exact key match.
std::vector<int> class_index_for(const AtomStructure& s, const Coloring& c) {
  if (c.atom_names.size() != s.atom_names().size())
    throw Error("coloring classes do not match algebra '" + s.name() +
                "': expected " + std::to_string(s.atom_names().size()) +
                " classes, got " + std::to_string(c.atom_names.size()));
  std::vector<int> idx(s.atom_count(), -1);
  for (int a = 0; a < s.atom_count(); ++a) {
    for (size_t t = 0; t < c.atom_names.size(); ++t)
      if (c.atom_names[t] == s.atom_name(a)) idx[a] = static_cast<int>(t);
    if (idx[a] < 0)
      throw Error("coloring has no class for atom '" + s.atom_name(a) +
                  "' of algebra '" + s.name() + "'");
  }
  return idx;
}

bool room(const std::vector<Violation>& v, const CheckOptions& opt) {
  return v.size() < opt.max_violations;
}

}  // namespace

std::string Violation::describe(const Coloring& c) const {
  auto name = [&](int t) {
    return t >= 0 && t < static_cast<int>(c.atom_names.size())
               ? c.atom_names[t]
               : std::string("?");
  };
  auto cycle_str = [&] {
    if (!cycle_text.empty()) return cycle_text;
    std::ostringstream cs;
    cs << "{" << cycle.atoms[0] << "," << cycle.atoms[1] << "," << cycle.atoms[2]
       << "}";
    return cs.str();
  };
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::NotPartition:
      if (assigned_to.empty()) {
        os << "not-partition: element " << element << " is in no class";
      } else {
        os << "not-partition: element " << element << " is in classes";
        for (int t : assigned_to) os << " " << name(t);
      }
      break;
    case ViolationKind::EmptyClass:
      os << "empty-class: class " << name(atom) << " has no elements";
      break;
    case ViolationKind::NotInverseClosed:
      os << "not-inverse-closed: " << element << " is in class " << name(atom)
         << " but inv(" << element << ") = " << c.group.inv(element) << " is not";
      break;
    case ViolationKind::ForbiddenWitnessed:
      os << "forbidden-witnessed: op(" << y << ", " << z << ") = " << result
         << " realizes forbidden cycle " << cycle_str();
      break;
    case ViolationKind::MandatoryUnwitnessed:
      os << "mandatory-unwitnessed: element " << element << " of class "
         << name(atom) << " has no decomposition for allowed cycle "
         << cycle_str() << " targeting atom "
         << (target_text.empty() ? std::to_string(target_atom) : target_text);
      break;
  }
  return os.str();
}

std::vector<Violation> check_partition(const Coloring& c, CheckOptions opt) {
  std::vector<Violation> out;
  const int n = c.group.order();
  const auto cls = element_classes(c);

  for (int x = 1; x < n && room(out, opt); ++x) {
    if (cls[x] == -1) {
      Violation v{ViolationKind::NotPartition};
      v.element = x;
      out.push_back(std::move(v));
    } else if (cls[x] == -2) {
      Violation v{ViolationKind::NotPartition};
      v.element = x;
      for (size_t t = 0; t < c.classes.size(); ++t)
        if (std::binary_search(c.classes[t].begin(), c.classes[t].end(), x))
          v.assigned_to.push_back(static_cast<int>(t));
      out.push_back(std::move(v));
    }
  }

  for (size_t t = 0; t < c.classes.size() && room(out, opt); ++t)
    if (c.classes[t].empty()) {
      Violation v{ViolationKind::EmptyClass};
      v.atom = static_cast<int>(t);
      out.push_back(std::move(v));
    }

  for (size_t t = 0; t < c.classes.size(); ++t)
    for (int x : c.classes[t]) {
      if (!room(out, opt)) return out;
      int ix = c.group.inv(x);
      if (!std::binary_search(c.classes[t].begin(), c.classes[t].end(), ix)) {
        Violation v{ViolationKind::NotInverseClosed};
        v.element = x;
        v.atom = static_cast<int>(t);
        out.push_back(std::move(v));
      }
    }
  return out;
}

std::vector<Violation> check_forbidden(const AtomStructure& s, const Coloring& c,
                                       CheckOptions opt) {
  const auto idx = class_index_for(s, c);
  const auto cls = element_classes(c);
  std::vector<Violation> out;

  for (const auto& cycle : s.forbidden()) {
    const auto& ci = c.classes[idx[cycle.atoms[0]]];
    const auto& cj = c.classes[idx[cycle.atoms[1]]];
    const int ck = idx[cycle.atoms[2]];
    for (int y : ci) {
      for (int z : cj) {
        int x = c.group.op(y, z);
        if (x != 0 && cls[x] == ck) {
          if (!room(out, opt)) return out;
          Violation v{ViolationKind::ForbiddenWitnessed};
          v.cycle = cycle;
          v.cycle_text = cycle_to_string(s, cycle);
          v.y = y;
          v.z = z;
          v.result = x;
          out.push_back(std::move(v));
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_mandatory(const AtomStructure& s, const Coloring& c,
                                       CheckOptions opt) {
  const auto idx = class_index_for(s, c);
  const auto cls = element_classes(c);
  const int n = c.group.order();
  std::vector<Violation> out;

  for (const auto& cycle : s.allowed_cycles()) {
    // distinct target atoms of the multiset
    for (int pos = 0; pos < 3; ++pos) {
      int target = cycle.atoms[pos];
      if (pos > 0 && target == cycle.atoms[pos - 1]) continue;
      // flanks: the remaining two atoms
      std::array<int, 2> flank{};
      int w = 0;
      for (int q = 0; q < 3; ++q)
        if (q != pos) flank[w++] = cycle.atoms[q];
      const int fi = idx[flank[0]], fj = idx[flank[1]];

      for (int x : c.classes[idx[target]]) {
        bool witnessed = false;
        for (int y = 1; y < n && !witnessed; ++y) {
          if (cls[y] != fi) continue;
          int z = c.group.op(c.group.inv(y), x);  // y . z = x
          if (z != 0 && cls[z] == fj) witnessed = true;
        }
        if (!witnessed) {
          if (!room(out, opt)) return out;
          Violation v{ViolationKind::MandatoryUnwitnessed};
          v.cycle = cycle;
          v.cycle_text = cycle_to_string(s, cycle);
          v.element = x;
          v.atom = idx[target];
          v.target_atom = target;
          v.target_text = s.atom_name(target);
          out.push_back(std::move(v));
        }
      }
    }
  }
  return out;
}

VerificationReport verify(const AtomStructure& s, const Coloring& c,
                          CheckOptions opt) {
  if (!validate_ra(s).valid())
    throw Error("algebra '" + s.name() + "' is not a valid integral RA");
  class_index_for(s, c);  // throws on key mismatch

  VerificationReport report;
  report.violations = check_partition(c, opt);
  if (report.violations.empty()) {
    auto forb = check_forbidden(s, c, opt);
    report.violations.insert(report.violations.end(), forb.begin(), forb.end());
    CheckOptions rest = opt;  // cap applies to the report as a whole
    rest.max_violations = opt.max_violations - report.violations.size();
    auto mand = check_mandatory(s, c, rest);
    report.violations.insert(report.violations.end(), mand.begin(), mand.end());
  }
  report.valid = report.violations.empty();
  return report;
}

RamseyResult ramsey_check(const Coloring& c, const RamseyBounds& bounds) {
  if (!c.group.is_cyclic_addition())
    throw Error("ramsey_check: defined for cyclic groups only");
  require_elements_in_range(c);
  const int n = c.group.order();

  RamseyResult result;
  for (const auto& [atom, bound] : bounds.bounds) {
    if (bound < 3) throw Error("ramsey_check: bounds must be at least 3");
    int t = -1;
    for (size_t i = 0; i < c.atom_names.size(); ++i)
      if (c.atom_names[i] == atom) t = static_cast<int>(i);
    if (t < 0) throw Error("ramsey_check: no class named '" + atom + "'");

    // connected(u,v) iff v-u or u-v lies in the class
    std::vector<char> in_class(n, 0);
    for (int x : c.classes[t]) {
      in_class[x] = 1;
      in_class[(n - x) % n] = 1;
    }

    // vertex-transitive, so any clique can be translated to contain 0
    std::vector<int> clique{0};
    std::vector<int> found;
    auto extend = [&](auto&& self, int next) -> bool {
      if (static_cast<int>(clique.size()) == bound) {
        found = clique;
        return true;
      }
      for (int v = next; v < n; ++v) {
        bool ok = true;
        for (int u : clique)
          if (!in_class[((v - u) % n + n) % n]) {
            ok = false;
            break;
          }
        if (!ok) continue;
        clique.push_back(v);
        if (self(self, v + 1)) return true;
        clique.pop_back();
      }
      return false;
    };
    bool has_clique = extend(extend, 1);
    result.classes.push_back(
        {atom, bound, !has_clique, has_clique ? found : std::vector<int>{}});
  }
  return result;
}

}  // namespace relrep
