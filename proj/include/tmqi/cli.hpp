#pragma once

#include <iosfwd>

namespace tmqi::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitMismatch = 3;

/// Runs the `tmqi` command line (score | eval | enhance | dump-phase).
/// argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmqi::cli
