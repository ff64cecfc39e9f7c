#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpath {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes shared by all subcommands.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Entry point of the `mpath` tool: subcommands validate, route, paths and
/// simulate. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpath
