#pragma once

#include <ostream>

namespace srn {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitModelError = 3,
  kExitMethodUnusable = 4,
  kExitTargetNotReached = 5,
  kExitNonAffine = 6,
  kExitPartialFailure = 7,
};

/// Entry point of the `srnsens` tool with subcommands estimate, benchmark
/// and oracle. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srn
