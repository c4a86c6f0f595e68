#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace loe {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the `loe` command line. `args` excludes the program name. Tables and
/// reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loe
