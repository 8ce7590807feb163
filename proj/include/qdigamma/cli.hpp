#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdigamma::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,     ///< inequality violation or convergence failure detected
    kInvalidInput = 2,    ///< bad option, parameter or config file
    kNumericalFailure = 3 ///< e.g. truncation not converged within the term cap
};

/// Runs one invocation. args excludes the program name, e.g.
/// {"eval", "--family", "qk", "--t", "2"}. Output is written to out only once
/// the command has completed; errors go to err as one-line JSON objects.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdigamma::cli
