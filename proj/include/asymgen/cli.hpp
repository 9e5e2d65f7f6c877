#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asymgen {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailures = 1, kExitUsage = 2 };

/// Runs one invocation: `args` excludes the program name. Records and reports
/// go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The demo transcript: one worked example per problem type, solved end to end.
std::string demo_text();

}  // namespace asymgen
