#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmeq {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,             // equivalent, or command succeeded
  kExitNotEquivalent = 1,  // a distinguishing witness was printed
  kExitUsage = 2,          // bad arguments, unreadable or invalid input file
  kExitResource = 3,       // a dimension or node cap was hit
};

/// Runs one command line. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmeq
