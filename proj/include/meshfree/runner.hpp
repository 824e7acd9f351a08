#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshfree/filter.hpp"
#include "meshfree/metrics.hpp"
#include "meshfree/scenarios.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

enum class Method { Implicit, ParticleFilter, Ekf };

std::string method_name(Method method);

struct MethodConfig {
  Method method = Method::Implicit;
  FilterConfig filter;   // implicit-filter parameters
  int particles = 10000; // PF ensemble size
};

// One realization: truth, per-step estimates and errors, step diagnostics.
struct RealizationResult {
  std::uint64_t seed = 0;
  TruthRecord truth;
  Matrix estimates;                 // d x K, column k-1 = posterior mean after step k
  std::vector<Real> errors;         // err_k
  std::vector<std::uint8_t> resampled;  // implicit only; zeros otherwise
  std::vector<Real> degeneracy;         // implicit only
  Real filter_seconds = 0.0;        // filter loop only, excludes truth and I/O
  bool diverged = false;
  std::string divergence_reason;
};

// Simulates the truth, runs the selected filter over it, and times the
// filter loop. Divergences (underflowed updates, domain violations) are
// captured in the result instead of propagating.
RealizationResult run_realization(const Scenario& scenario, const MethodConfig& method,
                                  std::uint64_t seed);

struct MultiRunResult {
  std::vector<RealizationResult> realizations;
  Real err_global = 0.0;          // over completed realizations
  Real mean_filter_seconds = 0.0; // over completed realizations
  int divergences = 0;
};

// J realizations with seeds base_seed + j, optionally across a worker pool.
MultiRunResult run_realizations(const Scenario& scenario, const MethodConfig& method,
                                std::uint64_t base_seed, int repetitions, int workers = 1);

}  // namespace meshfree
