// relrep: verify, search, and encode representations of symmetric integral
// relation algebras over finite groups.
//
// Exit codes: 0 affirmative (valid / found / sat / clique-free),
//             1 negative (invalid / none / unsat / clique found),
//             2 usage or input error,
//             3 timeout or partial result.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relrep/atoms.hpp"
#include "relrep/cnf.hpp"
#include "relrep/coloring.hpp"
#include "relrep/group.hpp"
#include "relrep/search.hpp"
#include "relrep/verify.hpp"

namespace fs = std::filesystem;
using namespace relrep;

namespace {

constexpr int kAffirmative = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kPartial = 3;

std::string sanitize(const std::string& spec) {
  std::string out = spec;
  for (char& c : out)
    if (c == '/' || c == ':' || c == '\\') c = '_';
  return out;
}

std::string verdict_name(SearchOutcome::Result r) {
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

void append_log(const std::string& path, const std::string& line) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot append to log: " + path);
  out << line << "\n";
}

std::string cycle_names(const AtomStructure& s, const DiversityCycle& c) {
  return cycle_to_string(s, c);
}

void print_structure(const AtomStructure& s, std::ostream& os) {
  os << s.name() << "  atoms:";
  for (const auto& a : s.atom_names()) os << " " << a;
  os << "  forbidden:";
  if (s.forbidden().empty()) os << " (none)";
  for (const auto& c : s.forbidden()) os << " " << cycle_names(s, c);
  os << "  flexible:";
  auto flex = s.flexible_atoms();
  if (flex.empty()) os << " (none)";
  for (int a : flex) os << " " << s.atom_name(a);
  os << "\n";
}

std::string default_solver() {
  const char* env = std::getenv("RELREP_SOLVER_CMD");
  return env ? std::string(env) : std::string();
}

struct SearchFlags {
  std::string algebra;
  std::string group_spec;
  int n_min = 0, n_max = 0;
  std::string engine = "backtrack";
  std::string solver_cmd = default_solver();
  double budget = 0;
  int jobs = 1;
  bool prune_multipliers = false;
  bool symmetry_break = false;
  std::string cert_dir = "certificates";
  std::string log_path;

  SearchConfig config() const {
    SearchConfig cfg;
    if (engine == "sat")
      cfg.engine = SearchConfig::Engine::Sat;
    else if (engine == "backtrack")
      cfg.engine = SearchConfig::Engine::Backtrack;
    else
      throw Error("unknown engine '" + engine + "' (want backtrack or sat)");
    cfg.parallel_width = jobs;
    cfg.prune_multipliers = prune_multipliers;
    cfg.time_budget_sec = budget;
    cfg.solver_cmd = solver_cmd;
    cfg.symmetry_break = symmetry_break;
    if (cfg.engine == SearchConfig::Engine::Sat && cfg.solver_cmd.empty())
      throw Error("sat engine requires --solver-cmd or RELREP_SOLVER_CMD");
    return cfg;
  }
};

std::string write_certificate(const std::string& cert_dir,
                              const AtomStructure& s, const std::string& spec,
                              const Coloring& c) {
  fs::create_directories(cert_dir);
  fs::path path = fs::path(cert_dir) / (s.name() + "_" + sanitize(spec) + ".json");
  save_coloring_file(c, path);
  return path.string();
}

int exit_code_for_search(bool any_found, bool any_timeout) {
  if (any_timeout) return kPartial;
  return any_found ? kAffirmative : kNegative;
}

int cmd_verify(const std::string& algebra, const std::string& coloring_path,
               size_t max_violations) {
  AtomStructure s = resolve_algebra(algebra);
  Coloring c = load_coloring_file(coloring_path);
  CheckOptions opt;
  if (max_violations > 0) opt.max_violations = max_violations;
  auto report = verify(s, c, opt);
  if (report.valid) {
    std::cout << "valid: " << coloring_path << " represents " << s.name()
              << " over " << c.group.spec() << "\n";
    return kAffirmative;
  }
  std::cout << "invalid: " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) std::cout << v.describe(c) << "\n";
  return kNegative;
}

int cmd_search(const SearchFlags& flags) {
  AtomStructure s = resolve_algebra(flags.algebra);
  SearchConfig cfg = flags.config();

  if (!flags.group_spec.empty()) {
    FiniteGroup g = parse_group_spec(flags.group_spec);
    auto outcome = search_group(s, g, cfg);
    std::string cert;
    if (outcome.result == SearchOutcome::Result::Found)
      cert = write_certificate(flags.cert_dir, s, g.spec(), *outcome.coloring);
    std::cout << g.spec() << ": " << verdict_name(outcome.result)
              << "  nodes=" << outcome.stats.nodes;
    if (!cert.empty()) std::cout << "  certificate=" << cert;
    std::cout << "\n";
    append_log(flags.log_path, log_record(s.name(), g.spec(), outcome, cert));
    return exit_code_for_search(outcome.result == SearchOutcome::Result::Found,
                                outcome.result == SearchOutcome::Result::Timeout);
  }

  if (flags.n_min < 1 || flags.n_max < flags.n_min)
    throw Error("need --group, or --n-min and --n-max with 1 <= min <= max");
  auto spec_result = spectrum(s, flags.n_min, flags.n_max, cfg);
  bool any_found = false;
  for (int n = flags.n_min; n <= flags.n_max; ++n) {
    std::string group_spec = "z" + std::to_string(n);
    SearchOutcome outcome;
    outcome.stats = spec_result.stats.at(n);
    std::string cert;
    if (spec_result.certificates.count(n)) {
      outcome.result = SearchOutcome::Result::Found;
      any_found = true;
      cert = write_certificate(flags.cert_dir, s, group_spec,
                               spec_result.certificates.at(n));
    } else if (std::count(spec_result.timeouts.begin(), spec_result.timeouts.end(),
                          n)) {
      outcome.result = SearchOutcome::Result::Timeout;
    } else {
      outcome.result = SearchOutcome::Result::None;
    }
    std::cout << group_spec << ": " << verdict_name(outcome.result)
              << "  nodes=" << outcome.stats.nodes;
    if (!cert.empty()) std::cout << "  certificate=" << cert;
    std::cout << "\n";
    append_log(flags.log_path, log_record(s.name(), group_spec, outcome, cert));
  }
  return exit_code_for_search(any_found, spec_result.partial());
}

int cmd_spectrum(const SearchFlags& flags) {
  AtomStructure s = resolve_algebra(flags.algebra);
  if (flags.n_min < 1 || flags.n_max < flags.n_min)
    throw Error("spectrum needs --n-min and --n-max with 1 <= min <= max");
  auto result = spectrum(s, flags.n_min, flags.n_max, flags.config());

  std::cout << "spectrum of " << s.name() << " over [" << flags.n_min << ", "
            << flags.n_max << "]: {";
  for (size_t i = 0; i < result.found.size(); ++i)
    std::cout << (i ? ", " : "") << result.found[i];
  std::cout << "}\n";
  for (int n : result.found) {
    std::string group_spec = "z" + std::to_string(n);
    std::string cert = write_certificate(flags.cert_dir, s, group_spec,
                                         result.certificates.at(n));
    std::cout << group_spec << ": certificate=" << cert << "\n";
    SearchOutcome outcome;
    outcome.result = SearchOutcome::Result::Found;
    outcome.stats = result.stats.at(n);
    append_log(flags.log_path, log_record(s.name(), group_spec, outcome, cert));
  }
  if (result.partial()) {
    std::cout << "partial: timeouts at";
    for (int n : result.timeouts) std::cout << " " << n;
    std::cout << "\n";
    return kPartial;
  }
  return result.found.empty() ? kNegative : kAffirmative;
}

int cmd_enumerate(int diversity_atoms, bool flexible_only,
                  const std::string& write_dir) {
  auto structures = enumerate_structures(diversity_atoms, flexible_only);
  for (const auto& s : structures) print_structure(s, std::cout);
  std::cout << "total: " << structures.size() << "\n";
  if (!write_dir.empty()) {
    fs::create_directories(write_dir);
    for (const auto& s : structures)
      save_algebra_file(s, fs::path(write_dir) / (s.name() + ".json"));
    std::cout << "written to " << write_dir << "\n";
  }
  return kAffirmative;
}

int cmd_encode(const std::string& algebra, int n, bool symmetry_break,
               const std::string& cnf_path, const std::string& map_path) {
  AtomStructure s = resolve_algebra(algebra);
  auto inst = encode(s, n, symmetry_break);
  emit_dimacs(inst, cnf_path, map_path);
  std::cout << "wrote " << cnf_path << " (" << inst.var_count << " vars, "
            << inst.clauses.size() << " clauses) and " << map_path << "\n";
  return kAffirmative;
}

int cmd_decode(const std::string& algebra, int n, const std::string& map_path,
               const std::string& model_path, const std::string& out_path) {
  AtomStructure s = resolve_algebra(algebra);
  std::ifstream in(model_path);
  if (!in) throw Error("cannot open model file: " + model_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  std::set<int> trues = parse_model_lines(text);
  if (trues.empty()) {
    // fall back to a bare literal list
    std::istringstream ls(text);
    long lit;
    while (ls >> lit)
      if (lit > 0) trues.insert(static_cast<int>(lit));
  }
  Coloring c = decode(fs::path(map_path), trues, s, n);
  save_coloring_file(c, out_path);
  auto report = verify(s, c);
  std::cout << "decoded coloring written to " << out_path << " ("
            << (report.valid ? "valid" : "INVALID") << ")\n";
  return report.valid ? kAffirmative : kNegative;
}

int cmd_ramsey(const std::string& coloring_path, const std::string& bounds_text) {
  Coloring c = load_coloring_file(coloring_path);
  RamseyBounds bounds;
  std::istringstream in(bounds_text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error("bad bounds '" + bounds_text + "' (want atom=t,atom=t,...)");
    bounds.bounds.push_back(
        {item.substr(0, eq), std::atoi(item.substr(eq + 1).c_str())});
  }
  if (bounds.bounds.empty()) throw Error("no bounds given");

  auto result = ramsey_check(c, bounds);
  for (const auto& pc : result.classes) {
    std::cout << "class " << pc.atom << " bound " << pc.bound << ": ";
    if (pc.clique_free) {
      std::cout << "clique-free\n";
    } else {
      std::cout << "monochromatic K" << pc.bound << " at vertices";
      for (int v : pc.clique) std::cout << " " << v;
      std::cout << "\n";
    }
  }
  std::cout << (result.clique_free() ? "clique-free" : "clique found") << "\n";
  return result.clique_free() ? kAffirmative : kNegative;
}

int cmd_catalog(const std::string& algebra) {
  if (algebra.empty()) {
    for (const auto& e : catalog()) print_structure(e.structure, std::cout);
    std::cout << "total: " << catalog().size() << "\n";
    return kAffirmative;
  }
  const AtomStructure* s = find_in_catalog(algebra);
  if (!s) throw Error("unknown catalog algebra '" + algebra + "'");
  print_structure(*s, std::cout);
  for (const auto& e : catalog())
    if (e.structure.name() == s->name())
      std::cout << "provenance: " << e.provenance << "\n";
  std::cout << "allowed:";
  for (const auto& c : s->allowed_cycles()) std::cout << " " << cycle_names(*s, c);
  std::cout << "\n";
  auto validity = validate_ra(*s);
  std::cout << "integral RA: " << (validity.valid() ? "yes" : "NO") << "\n";
  return kAffirmative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "relrep: representations of symmetric integral relation algebras over "
      "finite groups"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 affirmative (valid/found/sat/clique-free), 1 negative,\n"
      "2 usage or input error, 3 timeout or partial result.");

  // verify
  std::string v_algebra, v_coloring;
  size_t v_max_violations = 0;
  auto* verify_cmd =
      app.add_subcommand("verify", "check a coloring against an algebra");
  verify_cmd->add_option("--algebra", v_algebra, "catalog name or algebra file")
      ->required();
  verify_cmd->add_option("--coloring", v_coloring, "coloring file")->required();
  verify_cmd->add_option("--max-violations", v_max_violations,
                         "cap on reported violations (default 10000)");

  // search
  SearchFlags sf;
  auto* search_cmd =
      app.add_subcommand("search", "search for a representation over a group "
                                   "or a range of cyclic moduli");
  search_cmd->add_option("--algebra", sf.algebra)->required();
  search_cmd->add_option("--group", sf.group_spec, "zN, sK, or cayley:<path>");
  search_cmd->add_option("--n-min", sf.n_min);
  search_cmd->add_option("--n-max", sf.n_max);
  search_cmd->add_option("--engine", sf.engine, "backtrack (default) or sat");
  search_cmd->add_option("--solver-cmd", sf.solver_cmd,
                         "external solver command (default $RELREP_SOLVER_CMD)");
  search_cmd->add_option("--budget", sf.budget, "seconds per group, 0 = unlimited");
  search_cmd->add_option("--jobs", sf.jobs, "parallel workers across moduli");
  search_cmd->add_flag("--prune-multipliers", sf.prune_multipliers,
                       "existence-only multiplier pruning");
  search_cmd->add_flag("--symmetry-break", sf.symmetry_break,
                       "existence-only SAT symmetry breaking");
  search_cmd->add_option("--cert-dir", sf.cert_dir);
  search_cmd->add_option("--log", sf.log_path, "append one record per group");

  // spectrum
  SearchFlags pf;
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "cyclic spectrum over a modulus range");
  spectrum_cmd->add_option("--algebra", pf.algebra)->required();
  spectrum_cmd->add_option("--n-min", pf.n_min)->required();
  spectrum_cmd->add_option("--n-max", pf.n_max)->required();
  spectrum_cmd->add_option("--engine", pf.engine);
  spectrum_cmd->add_option("--solver-cmd", pf.solver_cmd);
  spectrum_cmd->add_option("--budget", pf.budget);
  spectrum_cmd->add_option("--jobs", pf.jobs);
  spectrum_cmd->add_flag("--prune-multipliers", pf.prune_multipliers);
  spectrum_cmd->add_flag("--symmetry-break", pf.symmetry_break);
  spectrum_cmd->add_option("--cert-dir", pf.cert_dir);
  spectrum_cmd->add_option("--log", pf.log_path);

  // enumerate
  int e_atoms = 0;
  bool e_flexible = false;
  std::string e_write_dir;
  auto* enum_cmd = app.add_subcommand(
      "enumerate", "canonical structures on a number of diversity atoms");
  enum_cmd->add_option("--diversity-atoms", e_atoms)->required();
  enum_cmd->add_flag("--flexible-only", e_flexible);
  enum_cmd->add_option("--write-dir", e_write_dir, "write algebra files here");

  // encode
  std::string en_algebra, en_cnf, en_map;
  int en_n = 0;
  bool en_sym = false;
  auto* encode_cmd =
      app.add_subcommand("encode", "emit DIMACS CNF for a cyclic modulus");
  encode_cmd->add_option("--algebra", en_algebra)->required();
  encode_cmd->add_option("--n", en_n)->required();
  encode_cmd->add_flag("--symmetry-break", en_sym);
  encode_cmd->add_option("--cnf", en_cnf)->required();
  encode_cmd->add_option("--map", en_map)->required();

  // decode
  std::string de_algebra, de_map, de_model, de_out;
  int de_n = 0;
  auto* decode_cmd =
      app.add_subcommand("decode", "turn a solver model into a coloring file");
  decode_cmd->add_option("--algebra", de_algebra)->required();
  decode_cmd->add_option("--n", de_n)->required();
  decode_cmd->add_option("--map", de_map)->required();
  decode_cmd->add_option("--model", de_model,
                         "solver output with v lines, or a literal list")
      ->required();
  decode_cmd->add_option("--out", de_out)->required();

  // ramsey
  std::string r_coloring, r_bounds;
  auto* ramsey_cmd = app.add_subcommand(
      "ramsey", "per-class clique bounds on a circulant coloring");
  ramsey_cmd->add_option("--coloring", r_coloring)->required();
  ramsey_cmd->add_option("--bounds", r_bounds, "atom=t pairs, e.g. a=4,b=3,c=3")
      ->required();

  // catalog
  std::string c_algebra;
  auto* catalog_cmd = app.add_subcommand("catalog", "built-in algebras");
  catalog_cmd->add_option("--algebra", c_algebra, "show one entry in detail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*verify_cmd) return cmd_verify(v_algebra, v_coloring, v_max_violations);
    if (*search_cmd) return cmd_search(sf);
    if (*spectrum_cmd) return cmd_spectrum(pf);
    if (*enum_cmd) return cmd_enumerate(e_atoms, e_flexible, e_write_dir);
    if (*encode_cmd) return cmd_encode(en_algebra, en_n, en_sym, en_cnf, en_map);
    if (*decode_cmd) return cmd_decode(de_algebra, de_n, de_map, de_model, de_out);
    if (*ramsey_cmd) return cmd_ramsey(r_coloring, r_bounds);
    if (*catalog_cmd) return cmd_catalog(c_algebra);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
