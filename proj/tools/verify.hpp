#pragma once

// Named end-to-end checks behind `mzero verify`.

#include <functional>
#include <string>
#include <vector>

#include "mzero/chiodo.hpp"
#include "mzero/frobenius.hpp"
#include "mzero/integrate.hpp"
#include "mzero/reconstruct.hpp"

namespace mzero {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Informational entries never fail the run.
  bool informational = false;
};

/// Reference list of the 13 correlators not forced to vanish a priori, sorted.
std::vector<std::vector<Basis>> listed_nonvanishing_correlators();

/// Runs every check; `progress` is called after each one.
std::vector<CheckResult> run_verification(const Integrator& engine,
                                          const std::function<void(const CheckResult&)>& progress = {});

}  // namespace mzero
