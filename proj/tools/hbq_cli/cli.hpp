#pragma once

namespace hbq::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
};

/// Entry point behind the hbq executable.
int run(int argc, char** argv);

}  // namespace hbq::cli
