#pragma once

#include <ostream>

namespace hfgate::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputFailure = 2,      // bad flags, config, or inputs
  kNumericalFailure = 3,  // resolution, convergence, or degenerate-site failures
};

// Entry point for the command-line tool. Diagnostics go to `err`; progress
// and the list of written files go to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hfgate::cli
