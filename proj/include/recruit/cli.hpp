#pragma once

#include <string>
#include <vector>

namespace recruit::cli {

struct RunResult {
  int exit_code = 0;
  std::string out;  // rendered document
  std::string err;  // diagnostics
};

// Runs one CLI invocation (args excludes the program name). Never throws;
// failures are reported through exit_code and err.
RunResult run(const std::vector<std::string>& args);

}  // namespace recruit::cli
