#pragma once

#include <string>
#include <vector>

namespace stocheck {

struct CliResult {
  int exit_code = 0;
  std::string report;  // JSON report (empty on usage errors)
  std::string message; // help text or error description
};

/// Runs one CLI command. Exit codes: 0 success, 2 input error, 3 domain error,
/// 4 numerical failure.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace stocheck
