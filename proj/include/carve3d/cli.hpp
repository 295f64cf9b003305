#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carve3d::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadArguments = 2;
inline constexpr int kIoError = 3;
inline constexpr int kAugmentError = 4;

// Runs the command line `args` (args[0] is the program name). Machine-readable
// results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carve3d::cli
