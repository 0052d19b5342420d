#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kaonpair::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;   ///< bad arguments, configuration or domain errors
inline constexpr int kExitRuntime = 3; ///< generation and I/O failures

/// Runs the command line `args` (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kaonpair::cli
