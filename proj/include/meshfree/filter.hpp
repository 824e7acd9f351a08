#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "meshfree/kdtree.hpp"
#include "meshfree/model.hpp"
#include "meshfree/newton.hpp"
#include "meshfree/shepard.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

// Point cloud H_k with one normalized posterior density value per node.
struct PointCloud {
  int step = 0;
  Matrix nodes;   // d x N, one node per column
  Vector values;  // nonnegative, sums to 1

  Index size() const { return nodes.cols(); }
};

struct FilterConfig {
  int node_count = 1000;   // N
  int noise_samples = 10;  // M backward solves per node
  ShepardConfig shepard;
  SolveConfig solve;
  Real epsilon = -1.0;      // degeneracy threshold; <0 means 0.01/N
  Real tau = 0.2;           // resample when the degenerate fraction reaches tau
  Real jitter_scale = 1.0;  // multiplier on the resampling bandwidth
  Real hit_radius_rel = 1e-12;  // exact-hit radius as a fraction of the cloud extent
  bool shared_noise = false;    // one noise set per step instead of per node
  int threads = 1;              // workers for the per-node prediction loop

  Real effective_epsilon() const { return epsilon > 0 ? epsilon : 0.01 / node_count; }
};

// Posterior cloud plus the search structure over it; the index snapshot is
// what the next prediction stage interpolates against.
struct FilterState {
  PointCloud cloud;
  std::shared_ptr<const KnnIndex> index;

  static FilterState from_cloud(PointCloud cloud);
};

struct StepDiagnostics {
  Real degeneracy_ratio = 0.0;
  bool resampled = false;
  bool resample_fallback = false;  // no node was above epsilon
  int solver_failures = 0;         // non-converged backward solves
  int starved_nodes = 0;           // nodes whose M solves all failed
  int domain_redraws = 0;          // jitter redraws during resampling
  int rescued_nodes = 0;           // seeds re-drawn after a stuck propagation
};

// Thrown when an observation annihilates every posterior value.
struct FilterDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// N draws from p0 with uniform values 1/N. Draws violating the model domain
// are rejected and redrawn (tiny truncation for the scenarios at hand).
PointCloud init_cloud(const GaussianSpec& p0, int node_count, RandomSource& rng,
                      const StateSpaceModel* model = nullptr);

// Fraction of nodes with value < epsilon.
Real degeneracy_ratio(const PointCloud& cloud, Real epsilon);

// Intermediate node set: nodes at or above epsilon are kept bitwise, the
// rest are replaced by a surviving donor (categorical in the values) plus
// Gaussian jitter with per-dimension bandwidth
//   b_m = jitter_scale * weighted_std_m * N^(-1/(d+4)).
Matrix resample(const PointCloud& cloud, Real epsilon, Real jitter_scale, RandomSource& rng,
                const StateSpaceModel* model = nullptr, StepDiagnostics* diag = nullptr);

// Unnormalized prior values at new_nodes: for each node, M backward solves of
// the state equation against per-(step,node) noise draws, averaging the
// previous interpolant at the converged pre-images.
Vector predict(const FilterState& previous, const Matrix& new_nodes, const StateSpaceModel& model,
               const FilterConfig& cfg, std::uint64_t seed, int k, StepDiagnostics* diag = nullptr);

// Normalized posterior from prior values and the step-k observation;
// log-space with max subtraction. Throws FilterDivergence when every
// product underflows.
Vector bayes_update(const Vector& prior, const Matrix& nodes, const Vector& observation,
                    const StateSpaceModel& model, int k);

Vector posterior_mean(const PointCloud& cloud);
// Value-weighted standard deviation per dimension.
Vector posterior_std(const PointCloud& cloud);

// One full step: degeneracy test, optional resampling, propagation of the
// node set, prediction, Bayes update. `seed` is the realization seed; all
// randomness is drawn from streams derived from (seed, k, node).
FilterState filter_step(const FilterState& state, const StateSpaceModel& model,
                        const FilterConfig& cfg, const Vector& observation, std::uint64_t seed,
                        int k, StepDiagnostics* diag = nullptr);

}  // namespace meshfree
