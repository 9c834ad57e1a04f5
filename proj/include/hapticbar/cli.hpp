#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hapticbar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverError = 1;
inline constexpr int kExitConfigError = 2;

/// Environment variable overriding the sweep worker count.
inline constexpr const char* kWorkersEnv = "HAPTICBAR_WORKERS";

/// Runs the command line; args[0] is the program name. Subcommands:
/// validate, modes, respond, sweep, deadzones.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hapticbar::cli
