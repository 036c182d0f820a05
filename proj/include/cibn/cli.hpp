#pragma once

#include <iosfwd>

namespace cibn {

// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 1,          // parse, config or budget problems
    kExitContradiction = 2,  // CI hit conflicting orientations
    kExitNoOrientation = 3,  // completion found no valid orientation
    kExitTrialFailures = 4,  // verify saw failing trials
};

/// Entry point shared by the binary and the tests. Diagnostics go to `err`, each line
/// prefixed with "error:".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cibn
