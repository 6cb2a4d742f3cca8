#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcconf::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kIo = 3,
    kInternal = 4,
};

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Diagnostics go to `err`, help text to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcconf::cli
