#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttcalc {

/// Exit codes of the command-line tool.
enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitParse = 2, kExitResource = 3 };

/// Runs `ttcalc <args...>` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ttcalc
