#pragma once

#include <ostream>

namespace mlstar::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kCertificationFailed = 1,
    kUsageError = 2,
    kEvaluationError = 3,
};

/// Runs the command line `argv` (argv[0] is the program name) writing to the
/// given streams; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlstar::cli
