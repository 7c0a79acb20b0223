#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace interact {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  // bad flags, bad config, unusable input
  kExitIo = 2,
  kExitInternal = 3,  // invariant violation
};

/// Runs one subcommand. `args` excludes the program name. Data goes to files
/// or `out`; progress and errors go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace interact
