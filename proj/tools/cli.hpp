#pragma once

#include <iosfwd>

namespace sgap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `sgap` executable: bound | model | verify | heat.
/// Writes the JSON report to `out`, diagnostics to `err`, returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgap::cli
