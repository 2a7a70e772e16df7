#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace entsep::cli {

enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kUsageError = 2,
  kViolation = 3,
};

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entsep::cli
