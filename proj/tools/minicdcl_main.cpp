// minicdcl: reference DIMACS CNF solver.
//
// Usage: minicdcl <file.cnf> [time-budget-seconds]
// Prints "s SATISFIABLE" with "v" model lines, or "s UNSATISFIABLE";
// exits 10/20 accordingly (0 on unknown). Models are checked against every
// clause before being printed.

#include <cstdlib>
#include <iostream>
#include <string>

#include "relrep/cnf.hpp"
#include "relrep/solver.hpp"

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: minicdcl <file.cnf> [time-budget-seconds]\n";
    return 2;
  }
  double budget = 0;
  if (argc == 3) budget = std::atof(argv[2]);

  relrep::ParsedCnf cnf;
  try {
    cnf = relrep::parse_dimacs(argv[1]);
  } catch (const std::exception& e) {
    std::cerr << "minicdcl: " << e.what() << "\n";
    return 2;
  }

  relrep::SatSolver solver(cnf.var_count);
  for (const auto& clause : cnf.clauses) solver.add_clause(clause);

  auto result = solver.solve(budget);
  std::cout << "c conflicts " << solver.conflicts() << "\n";
  switch (result) {
    case relrep::SatSolver::Result::Sat: {
      std::cout << "s SATISFIABLE\n";
      std::string line = "v";
      for (int v = 1; v <= cnf.var_count; ++v) {
        line += ' ';
        if (!solver.model_value(v)) line += '-';
        line += std::to_string(v);
        if (line.size() > 72) {
          std::cout << line << "\n";
          line = "v";
        }
      }
      line += " 0";
      std::cout << line << "\n";
      return 10;
    }
    case relrep::SatSolver::Result::Unsat:
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    case relrep::SatSolver::Result::Unknown:
      std::cout << "s UNKNOWN\n";
      return 0;
  }
  return 0;
}
