#pragma once

// Command-line front end. Exit codes:
//   0  success (including --help)
//   1  usage error: unknown or missing flag, malformed run config
//   2  data or format error raised by the engine, or a filesystem failure

#include <iosfwd>

namespace patchad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Diagnostics go to `err`; results go to files or `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patchad::cli
