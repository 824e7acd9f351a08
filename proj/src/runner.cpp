#include "meshfree/runner.hpp"

#include <chrono>

#include "meshfree/ekf.hpp"
#include "meshfree/particle_filter.hpp"
#include "meshfree/threading.hpp"

namespace meshfree {

std::string method_name(Method method) {
  switch (method) {
    case Method::Implicit: return "implicit";
    case Method::ParticleFilter: return "pf";
    case Method::Ekf: return "ekf";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

void run_implicit(const Scenario& scenario, const MethodConfig& method, std::uint64_t seed,
                  RealizationResult& out) {
  RandomSource init_rng(seed, streams::kInit);
  FilterState state = FilterState::from_cloud(
      init_cloud(scenario.initial, method.filter.node_count, init_rng, &scenario.model));
  for (int k = 1; k <= scenario.steps; ++k) {
    StepDiagnostics diag;
    state = filter_step(state, scenario.model, method.filter, out.truth.observations.col(k - 1),
                        seed, k, &diag);
    out.estimates.col(k - 1) = posterior_mean(state.cloud);
    out.resampled[k - 1] = diag.resampled ? 1 : 0;
    out.degeneracy[k - 1] = diag.degeneracy_ratio;
  }
}

void run_pf(const Scenario& scenario, const MethodConfig& method, std::uint64_t seed,
            RealizationResult& out) {
  RandomSource init_rng(seed, streams::kInit);
  ParticleEnsemble ens =
      init_ensemble(scenario.initial, method.particles, init_rng, &scenario.model);
  for (int k = 1; k <= scenario.steps; ++k) {
    ens = pf_step(ens, scenario.model, out.truth.observations.col(k - 1), seed, k,
                  method.filter.threads);
    out.estimates.col(k - 1) = ensemble_mean(ens);
  }
}

void run_ekf(const Scenario& scenario, const MethodConfig& method, std::uint64_t seed,
             RealizationResult& out) {
  (void)method;
  (void)seed;
  EkfBelief belief{scenario.initial.mean, scenario.initial.covariance_matrix()};
  for (int k = 1; k <= scenario.steps; ++k) {
    belief = ekf_step(belief, scenario.model, out.truth.observations.col(k - 1), k);
    out.estimates.col(k - 1) = belief.mean;
  }
}

}  // namespace

RealizationResult run_realization(const Scenario& scenario, const MethodConfig& method,
                                  std::uint64_t seed) {
  RealizationResult out;
  out.seed = seed;
  const Index d = scenario.model.state_dim;
  out.estimates = Matrix::Zero(d, scenario.steps);
  out.resampled.assign(scenario.steps, 0);
  out.degeneracy.assign(scenario.steps, 0.0);

  try {
    out.truth = simulate_truth(scenario, RandomSource(seed, streams::kTruth));
  } catch (const DomainError& err) {
    out.diverged = true;
    out.divergence_reason = std::string("truth: ") + err.what();
    return out;
  }

  const auto start = Clock::now();
  try {
    switch (method.method) {
      case Method::Implicit: run_implicit(scenario, method, seed, out); break;
      case Method::ParticleFilter: run_pf(scenario, method, seed, out); break;
      case Method::Ekf: run_ekf(scenario, method, seed, out); break;
    }
  } catch (const std::runtime_error& err) {
    out.diverged = true;
    out.divergence_reason = err.what();
  }
  out.filter_seconds = std::chrono::duration<Real>(Clock::now() - start).count();

  if (!out.diverged) {
    out.errors.resize(scenario.steps);
    for (int k = 1; k <= scenario.steps; ++k)
      out.errors[k - 1] = step_error(out.estimates.col(k - 1), out.truth.states.col(k));
  }
  return out;
}

MultiRunResult run_realizations(const Scenario& scenario, const MethodConfig& method,
                                std::uint64_t base_seed, int repetitions, int workers) {
  MultiRunResult result;
  result.realizations.resize(repetitions);
  parallel_for(repetitions, workers, [&](int begin, int end) {
    for (int j = begin; j < end; ++j)
      result.realizations[j] = run_realization(scenario, method, base_seed + j);
  });

  std::vector<ErrorSeries> series;
  Real seconds = 0.0;
  for (int j = 0; j < repetitions; ++j) {
    const RealizationResult& r = result.realizations[j];
    if (r.diverged) {
      ++result.divergences;
      continue;
    }
    series.push_back({r.errors, j, method_name(method.method)});
    seconds += r.filter_seconds;
  }
  if (!series.empty()) {
    result.err_global = global_rmse(series);
    result.mean_filter_seconds = seconds / static_cast<Real>(series.size());
  }
  return result;
}

}  // namespace meshfree
