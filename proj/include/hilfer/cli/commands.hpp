#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hilfer::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 2,            ///< bad arguments, config, or domain error
    kExitCertificateFails = 3,
    kExitNonconvergence = 4,
};

/// Entry point behind the `hilfer` executable. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hilfer::cli
