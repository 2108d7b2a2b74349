#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "relrep/atoms.hpp"
#include "relrep/cnf.hpp"
#include "relrep/coloring.hpp"
#include "relrep/group.hpp"
#include "relrep/search.hpp"
#include "relrep/verify.hpp"

namespace py = pybind11;
using namespace relrep;

namespace {

std::vector<std::array<std::string, 3>> cycles_as_names(
    const AtomStructure& s, const std::vector<DiversityCycle>& cycles) {
  std::vector<std::array<std::string, 3>> out;
  for (const auto& c : cycles)
    out.push_back({s.atom_name(c.atoms[0]), s.atom_name(c.atoms[1]),
                   s.atom_name(c.atoms[2])});
  return out;
}

SearchConfig make_config(const std::string& engine, int jobs,
                         bool prune_multipliers, double budget,
                         const std::string& solver_cmd, bool symmetry_break) {
  SearchConfig cfg;
  if (engine == "sat")
    cfg.engine = SearchConfig::Engine::Sat;
  else if (engine == "backtrack")
    cfg.engine = SearchConfig::Engine::Backtrack;
  else
    throw Error("unknown engine '" + engine + "'");
  cfg.parallel_width = jobs;
  cfg.prune_multipliers = prune_multipliers;
  cfg.time_budget_sec = budget;
  cfg.solver_cmd = solver_cmd;
  cfg.symmetry_break = symmetry_break;
  return cfg;
}

std::string result_name(SearchOutcome::Result r) {
  switch (r) {
    case SearchOutcome::Result::Found:
      return "found";
    case SearchOutcome::Result::None:
      return "none";
    case SearchOutcome::Result::Timeout:
      return "timeout";
  }
  return "?";
}

py::dict coloring_to_dict(const Coloring& c) {
  py::dict classes;
  for (size_t t = 0; t < c.atom_names.size(); ++t)
    classes[py::str(c.atom_names[t])] = c.classes[t];
  py::dict out;
  out["group"] = c.group.spec();
  out["classes"] = classes;
  return out;
}

Coloring coloring_from_parts(const std::string& group_spec,
                             const std::map<std::string, std::vector<int>>& classes) {
  Coloring c{parse_group_spec(group_spec), {}, {}};
  for (const auto& [atom, elems] : classes) {
    c.atom_names.push_back(atom);
    auto sorted = elems;
    std::sort(sorted.begin(), sorted.end());
    c.classes.push_back(std::move(sorted));
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(relrep, m) {
  m.doc() = "representations of symmetric integral relation algebras over "
            "finite groups";

  py::register_exception<Error>(m, "RelrepError");

  py::class_<AtomStructure>(m, "AtomStructure")
      .def(py::init([](const std::string& name,
                       const std::vector<std::string>& atoms,
                       const std::vector<std::array<std::string, 3>>& forbidden) {
             return AtomStructure::from_names(name, atoms, forbidden);
           }),
           py::arg("name"), py::arg("diversity_atoms"), py::arg("forbidden"))
      .def_property_readonly("name", &AtomStructure::name)
      .def_property_readonly("diversity_atoms", &AtomStructure::atom_names)
      .def_property_readonly("forbidden",
                             [](const AtomStructure& s) {
                               return cycles_as_names(s, s.forbidden());
                             })
      .def("allowed_cycles",
           [](const AtomStructure& s) {
             return cycles_as_names(s, s.allowed_cycles());
           })
      .def("flexible_atoms",
           [](const AtomStructure& s) {
             std::vector<std::string> out;
             for (int a : s.flexible_atoms()) out.push_back(s.atom_name(a));
             return out;
           })
      .def("is_valid_ra",
           [](const AtomStructure& s) { return validate_ra(s).valid(); })
      .def("validity_summary",
           [](const AtomStructure& s) { return validate_ra(s).summary(s); })
      .def("canonicalize", [](const AtomStructure& s) { return canonicalize(s); })
      .def("__repr__", [](const AtomStructure& s) {
        return "<AtomStructure " + s.name() + ">";
      });

  py::class_<FiniteGroup>(m, "FiniteGroup")
      .def_static("cyclic", &FiniteGroup::cyclic, py::arg("n"))
      .def_static("symmetric", &FiniteGroup::symmetric, py::arg("k"))
      .def_static("from_spec",
                  [](const std::string& spec) { return parse_group_spec(spec); })
      .def_property_readonly("order", &FiniteGroup::order)
      .def_property_readonly("spec", &FiniteGroup::spec)
      .def("op", &FiniteGroup::op)
      .def("inv", &FiniteGroup::inv)
      .def("inverse_orbits", [](const FiniteGroup& g) {
        std::vector<std::vector<int>> out;
        for (const auto& o : inverse_orbits(g)) {
          std::vector<int> members(o.members.begin(),
                                   o.members.begin() + o.size);
          out.push_back(members);
        }
        return out;
      });

  py::class_<Coloring>(m, "Coloring")
      .def(py::init(&coloring_from_parts), py::arg("group"), py::arg("classes"))
      .def_property_readonly("group_spec",
                             [](const Coloring& c) { return c.group.spec(); })
      .def_property_readonly("classes",
                             [](const Coloring& c) {
                               std::map<std::string, std::vector<int>> out;
                               for (size_t t = 0; t < c.atom_names.size(); ++t)
                                 out[c.atom_names[t]] = c.classes[t];
                               return out;
                             })
      .def("as_dict", &coloring_to_dict);

  m.def("catalog", [] {
    std::vector<std::pair<AtomStructure, std::string>> out;
    for (const auto& e : catalog()) out.push_back({e.structure, e.provenance});
    return out;
  });
  m.def("resolve_algebra",
        [](const std::string& name) { return resolve_algebra(name); });
  m.def("load_algebra_file", &load_algebra_file);
  m.def("save_algebra_file", &save_algebra_file);
  m.def("enumerate_structures", &enumerate_structures, py::arg("diversity_atoms"),
        py::arg("flexible_only") = false);

  m.def("load_coloring_file", &load_coloring_file);
  m.def("save_coloring_file", &save_coloring_file);

  m.def(
      "verify",
      [](const AtomStructure& s, const Coloring& c) {
        auto report = verify(s, c);
        py::list violations;
        for (const auto& v : report.violations) violations.append(v.describe(c));
        py::dict out;
        out["valid"] = report.valid;
        out["violations"] = violations;
        return out;
      },
      py::arg("algebra"), py::arg("coloring"));

  m.def(
      "ramsey_check",
      [](const Coloring& c, const std::map<std::string, int>& bounds) {
        RamseyBounds rb;
        for (const auto& [atom, t] : bounds) rb.bounds.push_back({atom, t});
        auto result = ramsey_check(c, rb);
        py::dict per_class;
        for (const auto& pc : result.classes) {
          py::dict d;
          d["bound"] = pc.bound;
          d["clique_free"] = pc.clique_free;
          d["clique"] = pc.clique;
          per_class[py::str(pc.atom)] = d;
        }
        py::dict out;
        out["clique_free"] = result.clique_free();
        out["classes"] = per_class;
        return out;
      },
      py::arg("coloring"), py::arg("bounds"));

  m.def(
      "search_group",
      [](const AtomStructure& s, const FiniteGroup& g, const std::string& engine,
         int jobs, bool prune_multipliers, double budget,
         const std::string& solver_cmd, bool symmetry_break) {
        auto out = search_group(
            s, g,
            make_config(engine, jobs, prune_multipliers, budget, solver_cmd,
                        symmetry_break));
        py::dict d;
        d["result"] = result_name(out.result);
        d["nodes"] = out.stats.nodes;
        d["wall_sec"] = out.stats.wall_sec;
        d["coloring"] = out.coloring ? py::cast(*out.coloring) : py::none();
        return d;
      },
      py::arg("algebra"), py::arg("group"), py::arg("engine") = "backtrack",
      py::arg("jobs") = 1, py::arg("prune_multipliers") = false,
      py::arg("budget") = 0.0, py::arg("solver_cmd") = "",
      py::arg("symmetry_break") = false);

  m.def(
      "spectrum",
      [](const AtomStructure& s, int n_min, int n_max, const std::string& engine,
         int jobs, bool prune_multipliers, double budget,
         const std::string& solver_cmd, bool symmetry_break) {
        auto result = spectrum(
            s, n_min, n_max,
            make_config(engine, jobs, prune_multipliers, budget, solver_cmd,
                        symmetry_break));
        py::dict certs;
        for (const auto& [n, c] : result.certificates)
          certs[py::int_(n)] = py::cast(c);
        py::dict d;
        d["found"] = result.found;
        d["timeouts"] = result.timeouts;
        d["partial"] = result.partial();
        d["certificates"] = certs;
        return d;
      },
      py::arg("algebra"), py::arg("n_min"), py::arg("n_max"),
      py::arg("engine") = "backtrack", py::arg("jobs") = 1,
      py::arg("prune_multipliers") = false, py::arg("budget") = 0.0,
      py::arg("solver_cmd") = "", py::arg("symmetry_break") = false);

  m.def(
      "match_table",
      [](int n_max, int jobs) {
        auto report = match_table(enumerate_structures(2), n_max,
                                  make_config("backtrack", jobs, false, 0, "", false));
        py::list rows;
        for (const auto& row : report.rows) {
          py::dict d;
          d["structure"] = row.structure_name;
          d["spectrum"] = row.spectrum;
          d["matched_labels"] = row.matched_labels;
          rows.append(d);
        }
        py::dict d;
        d["rows"] = rows;
        d["minima"] = report.minima;
        d["matches_reference"] = report.matches_reference;
        return d;
      },
      py::arg("n_max") = 14, py::arg("jobs") = 1);

  m.def(
      "encode_dimacs",
      [](const AtomStructure& s, int n, const std::filesystem::path& cnf_path,
         const std::filesystem::path& map_path, bool symmetry_break) {
        auto inst = encode(s, n, symmetry_break);
        emit_dimacs(inst, cnf_path, map_path);
        py::dict d;
        d["vars"] = inst.var_count;
        d["clauses"] = inst.clauses.size();
        d["color_vars"] = inst.map.color_var_count();
        return d;
      },
      py::arg("algebra"), py::arg("n"), py::arg("cnf_path"), py::arg("map_path"),
      py::arg("symmetry_break") = false);

  m.def(
      "decode_model",
      [](const AtomStructure& s, int n, const std::filesystem::path& map_path,
         const std::set<int>& true_vars) {
        return decode(map_path, true_vars, s, n);
      },
      py::arg("algebra"), py::arg("n"), py::arg("map_path"),
      py::arg("true_vars"));

  m.def(
      "solve_with",
      [](const AtomStructure& s, int n, const std::string& solver_cmd,
         double budget, bool symmetry_break) {
        auto out = solve_external(encode(s, n, symmetry_break), s, solver_cmd,
                                  budget);
        py::dict d;
        switch (out.status) {
          case SolveOutcome::Status::Sat:
            d["status"] = "sat";
            break;
          case SolveOutcome::Status::Unsat:
            d["status"] = "unsat";
            break;
          case SolveOutcome::Status::Timeout:
            d["status"] = "timeout";
            break;
          case SolveOutcome::Status::Error:
            d["status"] = "error";
            break;
        }
        d["message"] = out.message;
        d["coloring"] = out.coloring ? py::cast(*out.coloring) : py::none();
        return d;
      },
      py::arg("algebra"), py::arg("n"), py::arg("solver_cmd"),
      py::arg("budget") = 0.0, py::arg("symmetry_break") = false);
}
