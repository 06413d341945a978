#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbdi::cli {

// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_io = 2;
inline constexpr int exit_corrupt = 3;
inline constexpr int exit_usage = 64;
inline constexpr int exit_empty_corpus = 65;

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace gbdi::cli
