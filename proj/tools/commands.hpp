#pragma once

#include <ostream>

namespace hrmod::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNegative = 2,
  kExitDisagreement = 3,
  kExitIndeterminate = 4,
};

/// Entry point of the hrmod tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrmod::cli
