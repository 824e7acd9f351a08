#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshfree/types.hpp"

namespace meshfree {

// Per-step estimation errors of one realization.
struct ErrorSeries {
  std::vector<Real> errors;  // err_k, k = 1..K
  int realization = 0;
  std::string method;
};

struct RunSummary {
  Real err_global = 0.0;
  Real wall_clock_seconds = 0.0;  // mean filter-loop seconds per realization
  std::string method;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  int divergences = 0;
};

// Full-state Euclidean error of one estimate.
Real step_error(const Vector& estimate, const Vector& truth);

// sqrt of the double average of squared per-step errors over realizations.
Real global_rmse(const std::vector<ErrorSeries>& series);

}  // namespace meshfree
