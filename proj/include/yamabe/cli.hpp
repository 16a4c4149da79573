#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace yamabe {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvariant = 2,
  kExitNonConvergence = 3,
};

/// Runs the command-line interface on `args` (program name excluded), writing
/// reports to `out` and diagnostics to `err`. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace yamabe
