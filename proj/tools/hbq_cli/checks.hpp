#pragma once

#include <string>
#include <vector>

namespace hbq::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double tolerance = 0.0;  // bound it was compared against
  std::string detail;
};

/// Fast invariant suite: DFT round trip and Parseval against a direct-sum
/// DFT, derivative exactness, RK4 order on y' = -y, zero-mode conservation,
/// convergence-order reproduction of the reference tables, solitary-wave
/// residuals, blow-up preconditions.  Runs in well under a minute.
std::vector<CheckResult> run_invariant_checks();

}  // namespace hbq::cli
