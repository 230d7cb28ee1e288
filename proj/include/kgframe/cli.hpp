#pragma once

// Command-line front end, callable in-process.
//
// Exit codes: 0 success / predicate true, 1 mathematical negative (not a
// K-g-frame, violated hypothesis, failed campaign), 2 input error.

#include <map>
#include <string>
#include <vector>

namespace kgframe::cli {

struct CommandResult {
  int exit_code = 0;
  std::string out;  // JSON or CSV report
  std::string err;  // diagnostics
};

// args excludes the program name, e.g. {"check", "--input", "spec.json"}.
// env supplies KGFRAME_TOL_RANK / KGFRAME_TOL_PSD / KGFRAME_TOL_RESIDUAL.
CommandResult run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {});

// Reads the three tolerance variables from the process environment.
std::map<std::string, std::string> tolerance_env();

}  // namespace kgframe::cli
