#pragma once

#include <string>
#include <vector>

namespace relrep {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string output;  // combined stdout
};

// Runs a command (argv form) capturing stdout; kills it past the deadline.
ProcessResult run_process(const std::vector<std::string>& argv,
                          double time_budget_sec = 0);

// Whitespace tokenization for "solver --flag" style command strings.
std::vector<std::string> split_command(const std::string& command);

}  // namespace relrep
