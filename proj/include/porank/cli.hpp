#pragma once

#include <string>
#include <vector>

namespace porank {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitNotConverged = 2 };

/// Entry point of the `porank` tool. args[0] is the program name.
/// Subcommands: fit, simulate, evaluate, export-dag, alpha-cut.
int run_cli(const std::vector<std::string>& args);

/// Parses "start:step:stop" (inclusive stop, up to rounding) into values.
std::vector<double> parse_grid(const std::string& text);

}  // namespace porank
