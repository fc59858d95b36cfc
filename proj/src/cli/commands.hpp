#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmlkit::cli {

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name), executes one subcommand and
/// writes its report. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmlkit::cli
