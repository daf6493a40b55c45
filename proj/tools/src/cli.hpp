#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vrm::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kMissingFile = 2,
  kBadInput = 3,
  kTooLarge = 4,
  kViolation = 5,
};

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vrm::cli
