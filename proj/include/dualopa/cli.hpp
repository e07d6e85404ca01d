#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dualopa::cli {

/// Environment variable consulted for the default --cutoff.
inline constexpr const char* kCutoffEnvVar = "DUALOPA_CUTOFF";

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kResourceLimit = 3,
  kTruncation = 4,
};

/// Parses an angle: a decimal, or a multiple/fraction of pi such as "pi",
/// "-pi", "2pi", "pi/4", "3pi/2". Returns nullopt on malformed input.
std::optional<double> parse_angle(std::string_view text);

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Results go to `out` unless --output names a file;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualopa::cli
