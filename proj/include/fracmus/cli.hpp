#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracmus::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kValidation = 2;
inline constexpr int kViolations = 3;
inline constexpr int kNoConvergence = 4;

// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fracmus::cli
