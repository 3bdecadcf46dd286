#pragma once

#include <iosfwd>

namespace glcn::cli {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kSolverFailure = 3 };

/// Entry point of the glcn tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glcn::cli
