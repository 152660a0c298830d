#pragma once

#include <iosfwd>

namespace abel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitUsage = 64;

/// Runs one command line; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace abel::cli
