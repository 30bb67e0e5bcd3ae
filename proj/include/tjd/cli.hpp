#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tjd {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitUsage = 2 };

/// Runs one CLI invocation (args exclude the program name). The JSON run
/// report goes to `out`, the human summary and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tjd
