#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swarmengage {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitInfeasible = 2,
};

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swarmengage
