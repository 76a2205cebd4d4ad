#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinalloc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kNotCertified = 3,
};

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// `out` or to the file named by -o; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kinalloc::cli
