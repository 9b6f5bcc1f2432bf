#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace slfm::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUnexpected = 1,
    kExitInput = 2,
    kExitDivergence = 3,
};

/// Runs the `slfm` command line. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slfm::cli
