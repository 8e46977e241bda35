#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace convexreg::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kSolverFailure = 3 };

/// Runs the command line `args` (program name excluded). Normal output goes
/// to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace convexreg::cli
