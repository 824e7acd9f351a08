#pragma once

#include <cstdint>
#include <stdexcept>

#include "meshfree/model.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

struct ParticleEnsemble {
  Matrix particles;  // d x P
  Vector weights;    // nonnegative, sums to 1

  Index size() const { return particles.cols(); }
};

struct EnsembleDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// P draws from p0 with uniform weights; out-of-domain draws are redrawn.
ParticleEnsemble init_ensemble(const GaussianSpec& p0, int particle_count, RandomSource& rng,
                               const StateSpaceModel* model = nullptr);

// One bootstrap step: propagate through the state model with fresh noise,
// weight by the observation likelihood (log-space), normalize, then
// systematic resampling back to uniform weights. Throws EnsembleDivergence
// when every weight underflows.
ParticleEnsemble pf_step(const ParticleEnsemble& ensemble, const StateSpaceModel& model,
                         const Vector& observation, std::uint64_t seed, int k, int threads = 1);

Vector ensemble_mean(const ParticleEnsemble& ensemble);

}  // namespace meshfree
