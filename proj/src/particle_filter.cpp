#include "meshfree/particle_filter.hpp"

#include <cmath>

#include "meshfree/threading.hpp"

namespace meshfree {

ParticleEnsemble init_ensemble(const GaussianSpec& p0, int particle_count, RandomSource& rng,
                               const StateSpaceModel* model) {
  if (particle_count < 1) throw std::invalid_argument("init_ensemble: particle_count must be >= 1");
  ParticleEnsemble ens;
  ens.particles.resize(p0.dim(), particle_count);
  ens.weights = Vector::Constant(particle_count, 1.0 / particle_count);
  const long cap = 100L * particle_count;
  long attempts = 0;
  for (int i = 0; i < particle_count; ++i) {
    Vector draw;
    do {
      if (++attempts > cap)
        throw std::runtime_error("init_ensemble: initial distribution incompatible with domain");
      draw = sample_gaussian(p0, rng);
    } while (model && !model->in_domain(draw));
    ens.particles.col(i) = draw;
  }
  return ens;
}

ParticleEnsemble pf_step(const ParticleEnsemble& ensemble, const StateSpaceModel& model,
                         const Vector& observation, std::uint64_t seed, int k, int threads) {
  const int p = static_cast<int>(ensemble.size());
  Matrix propagated(ensemble.particles.rows(), p);
  Vector loglik(p);

  std::vector<std::uint8_t> stuck(p, 0);
  parallel_for(p, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      RandomSource rng(seed, streams::per_node(streams::Purpose::PfPropagate, k, i));
      try {
        propagated.col(i) = propagate(model, ensemble.particles.col(i), rng, k - 1);
        loglik[i] = observation_loglik(model, propagated.col(i), observation, k);
      } catch (const DomainError&) {
        stuck[i] = 1;
      }
    }
  });
  // A particle with no in-domain successor is replaced by a weighted donor,
  // mirroring what the next resampling pass would do to it anyway.
  for (int i = 0; i < p; ++i) {
    if (!stuck[i]) continue;
    RandomSource rng(seed, streams::per_node(streams::Purpose::PfRescue, k, i));
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      Real acc = 0.0;
      const Real target = rng.uniform() * ensemble.weights.sum();
      Index donor = ensemble.size() - 1;
      for (Index j = 0; j < ensemble.size(); ++j) {
        acc += ensemble.weights[j];
        if (acc >= target) { donor = j; break; }
      }
      try {
        propagated.col(i) = propagate(model, ensemble.particles.col(donor), rng, k - 1);
        loglik[i] = observation_loglik(model, propagated.col(i), observation, k);
        placed = true;
      } catch (const DomainError&) {
      }
    }
    if (!placed) throw DomainError("pf_step: no viable particle seed", ensemble.particles.col(i));
  }

  const Real peak = loglik.maxCoeff();
  Vector weights(p);
  for (int i = 0; i < p; ++i) weights[i] = ensemble.weights[i] * std::exp(loglik[i] - peak);
  const Real total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw EnsembleDivergence("pf_step: ensemble divergence");
  weights /= total;

  // Systematic resampling back to equal weights.
  RandomSource rng(seed, streams::per_node(streams::Purpose::PfResample, k, 0));
  const Real offset = rng.uniform() / p;
  ParticleEnsemble next;
  next.particles.resize(propagated.rows(), p);
  next.weights = Vector::Constant(p, 1.0 / p);
  Real cumulative = weights[0];
  int src = 0;
  for (int j = 0; j < p; ++j) {
    const Real position = offset + static_cast<Real>(j) / p;
    while (cumulative < position && src + 1 < p) cumulative += weights[++src];
    next.particles.col(j) = propagated.col(src);
  }
  return next;
}

Vector ensemble_mean(const ParticleEnsemble& ensemble) {
  return ensemble.particles * ensemble.weights;
}

}  // namespace meshfree
