#pragma once

#include <string>
#include <vector>

namespace q2mpc {

// Outcome of one command dispatch: the full report text and the process
// exit code (0 success, 2 parse or config error, 3 structure violation,
// 4 protocol failure). The q2mpc binary prints `out` and returns `code`;
// tests call this directly.
struct CliResult {
  int code = 0;
  std::string out;
};

CliResult cli_main(const std::vector<std::string>& args);

}  // namespace q2mpc
