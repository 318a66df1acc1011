#pragma once

#include <iosfwd>

namespace sfmval {

// Exit codes of the sfmval executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. Data goes to files or `out`; diagnostics go to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int RunCli(int argc, const char* const* argv);

}  // namespace sfmval
