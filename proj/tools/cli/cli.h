#ifndef NVDD_TOOLS_CLI_H
#define NVDD_TOOLS_CLI_H

#include <ostream>

namespace nvdd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // usage, config or parse error
inline constexpr int kExitNumeric = 3;  // numeric failure during simulation

// Entry point of the nvdd tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvdd::cli

#endif  // NVDD_TOOLS_CLI_H
