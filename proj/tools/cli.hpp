#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zakharov::cli {

enum ExitCode : int { kStable = 0, kUnstable = 1, kUsage = 2, kInconclusive = 3 };

/// Run the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zakharov::cli
