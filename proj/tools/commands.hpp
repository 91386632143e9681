// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace needle_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation. `args` excludes the program name. Single
/// results go to `out` as one JSON object, sweeps as CSV; diagnostics and
/// the verify table go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace needle_lab::cli
