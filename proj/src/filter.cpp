#include "meshfree/filter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "meshfree/threading.hpp"

namespace meshfree {

namespace {

Real bbox_diagonal(const Matrix& nodes) {
  if (nodes.cols() == 0) return 0.0;
  return (nodes.rowwise().maxCoeff() - nodes.rowwise().minCoeff()).norm();
}

// Categorical draw by inverse CDF over a cumulative weight table.
int draw_categorical(const std::vector<Real>& cumulative, Real u) {
  const Real target = u * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                   static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

// One node drawn from the cloud proportionally to its value.
Vector draw_weighted_node(const PointCloud& cloud, RandomSource& rng) {
  const Real u = rng.uniform();
  Real acc = 0.0;
  const Real target = u * cloud.values.sum();
  for (Index i = 0; i < cloud.size(); ++i) {
    acc += cloud.values[i];
    if (acc >= target) return cloud.nodes.col(i);
  }
  return cloud.nodes.col(cloud.size() - 1);
}

constexpr int kJitterRetries = 100;

}  // namespace

FilterState FilterState::from_cloud(PointCloud cloud) {
  FilterState state;
  state.index = std::make_shared<KnnIndex>(cloud.nodes);
  state.cloud = std::move(cloud);
  return state;
}

PointCloud init_cloud(const GaussianSpec& p0, int node_count, RandomSource& rng,
                      const StateSpaceModel* model) {
  if (node_count < 1) throw std::invalid_argument("init_cloud: node_count must be >= 1");
  PointCloud cloud;
  cloud.step = 0;
  cloud.nodes.resize(p0.dim(), node_count);
  cloud.values = Vector::Constant(node_count, 1.0 / node_count);
  const long attempt_cap = 100L * node_count;
  long attempts = 0;
  for (int i = 0; i < node_count; ++i) {
    Vector draw;
    do {
      if (++attempts > attempt_cap)
        throw std::runtime_error("init_cloud: initial distribution incompatible with model domain");
      draw = sample_gaussian(p0, rng);
    } while (model && !model->in_domain(draw));
    cloud.nodes.col(i) = draw;
  }
  return cloud;
}

Real degeneracy_ratio(const PointCloud& cloud, Real epsilon) {
  const Index n = cloud.size();
  Index degenerate = 0;
  for (Index i = 0; i < n; ++i)
    if (cloud.values[i] < epsilon) ++degenerate;
  return static_cast<Real>(degenerate) / static_cast<Real>(n);
}

Matrix resample(const PointCloud& cloud, Real epsilon, Real jitter_scale, RandomSource& rng,
                const StateSpaceModel* model, StepDiagnostics* diag) {
  const Index n = cloud.size();
  const Index d = cloud.nodes.rows();

  std::vector<int> survivors;
  survivors.reserve(n);
  for (Index i = 0; i < n; ++i)
    if (cloud.values[i] >= epsilon) survivors.push_back(static_cast<int>(i));

  // Donor table: surviving nodes weighted by value; with no survivors fall
  // back to all nodes (uniform when the values have collapsed to zero).
  std::vector<int> donors;
  std::vector<Real> cumulative;
  if (!survivors.empty()) {
    donors = survivors;
    cumulative.reserve(survivors.size());
    Real acc = 0.0;
    for (int i : survivors) cumulative.push_back(acc += cloud.values[i]);
  } else {
    if (diag) diag->resample_fallback = true;
    donors.resize(n);
    cumulative.reserve(n);
    Real acc = 0.0;
    const Real total = cloud.values.sum();
    for (Index i = 0; i < n; ++i) {
      donors[static_cast<size_t>(i)] = static_cast<int>(i);
      cumulative.push_back(acc += (total > 0.0 ? cloud.values[i] : 1.0));
    }
  }

  // Silverman-style bandwidth from the value-weighted cloud spread.
  const Vector sigma = posterior_std(cloud);
  const Real shrink = std::pow(static_cast<Real>(n), -1.0 / (static_cast<Real>(d) + 4.0));
  const Vector bandwidth = jitter_scale * shrink * sigma;

  Matrix out = cloud.nodes;
  for (Index i = 0; i < n; ++i) {
    if (cloud.values[i] >= epsilon) continue;  // kept bitwise
    const int donor = donors[static_cast<size_t>(draw_categorical(cumulative, rng.uniform()))];
    Vector candidate(d);
    bool placed = false;
    for (int attempt = 0; attempt < kJitterRetries; ++attempt) {
      for (Index m = 0; m < d; ++m)
        candidate[m] = cloud.nodes(m, donor) + bandwidth[m] * rng.normal();
      if (!model || model->in_domain(candidate)) {
        placed = true;
        break;
      }
      if (diag) ++diag->domain_redraws;
    }
    out.col(i) = placed ? candidate : cloud.nodes.col(donor);
  }
  return out;
}

Vector predict(const FilterState& previous, const Matrix& new_nodes, const StateSpaceModel& model,
               const FilterConfig& cfg, std::uint64_t seed, int k, StepDiagnostics* diag) {
  const int n = static_cast<int>(new_nodes.cols());
  const int m = cfg.noise_samples;

  ShepardConfig shepard = cfg.shepard;
  shepard.exact_hit_radius = std::max(shepard.exact_hit_radius,
                                      cfg.hit_radius_rel * bbox_diagonal(previous.cloud.nodes));

  // Fallback value for nodes whose backward solves all fail: the smallest
  // positive density in the previous cloud.
  Real min_positive = std::numeric_limits<Real>::max();
  for (Index i = 0; i < previous.cloud.values.size(); ++i)
    if (previous.cloud.values[i] > 0.0) min_positive = std::min(min_positive, previous.cloud.values[i]);
  if (min_positive == std::numeric_limits<Real>::max()) min_positive = 0.0;

  std::vector<Vector> shared;
  if (cfg.shared_noise) {
    RandomSource rng(seed, streams::per_node(streams::Purpose::PredictShared, k, 0));
    shared.reserve(m);
    for (int j = 0; j < m; ++j) shared.push_back(sample_gaussian(model.state_noise, rng));
  }

  Vector prior(n);
  std::atomic<int> failures{0};
  std::atomic<int> starved{0};

  parallel_for(n, cfg.threads, [&](int begin, int end) {
    std::vector<Neighbor> scratch;
    int local_failures = 0;
    for (int i = begin; i < end; ++i) {
      RandomSource rng(seed, streams::per_node(streams::Purpose::Predict, k, i));
      const Vector target = new_nodes.col(i);
      Real acc = 0.0;
      int converged = 0;
      for (int j = 0; j < m; ++j) {
        const Vector w = cfg.shared_noise ? shared[j] : sample_gaussian(model.state_noise, rng);
        const SolveResult solved = implicit_solve(model, target, w, k - 1, target, cfg.solve);
        if (!solved.converged) {
          ++local_failures;
          continue;
        }
        acc += evaluate_density(*previous.index, previous.cloud.values, solved.root, shepard,
                                scratch);
        ++converged;
      }
      if (converged > 0) {
        prior[i] = acc / converged;
      } else {
        prior[i] = min_positive;
        starved.fetch_add(1, std::memory_order_relaxed);
      }
    }
    failures.fetch_add(local_failures, std::memory_order_relaxed);
  });

  if (diag) {
    diag->solver_failures += failures.load();
    diag->starved_nodes += starved.load();
  }
  return prior;
}

Vector bayes_update(const Vector& prior, const Matrix& nodes, const Vector& observation,
                    const StateSpaceModel& model, int k) {
  const Index n = prior.size();
  Vector loglik(n);
  for (Index i = 0; i < n; ++i)
    loglik[i] = observation_loglik(model, nodes.col(i), observation, k);
  const Real peak = loglik.maxCoeff();

  Vector posterior(n);
  for (Index i = 0; i < n; ++i) posterior[i] = prior[i] * std::exp(loglik[i] - peak);
  const Real total = posterior.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw FilterDivergence("bayes_update: observation incompatible with cloud");
  return posterior / total;
}

Vector posterior_mean(const PointCloud& cloud) { return cloud.nodes * cloud.values; }

Vector posterior_std(const PointCloud& cloud) {
  const Vector mean = posterior_mean(cloud);
  Vector var = Vector::Zero(cloud.nodes.rows());
  for (Index i = 0; i < cloud.size(); ++i) {
    const auto diff = cloud.nodes.col(i) - mean;
    var += cloud.values[i] * diff.cwiseAbs2();
  }
  return var.cwiseSqrt();
}

FilterState filter_step(const FilterState& state, const StateSpaceModel& model,
                        const FilterConfig& cfg, const Vector& observation, std::uint64_t seed,
                        int k, StepDiagnostics* diag) {
  if (k < 1 || k >= (1 << 12)) throw std::invalid_argument("filter_step: step index out of range");
  const Real epsilon = cfg.effective_epsilon();

  StepDiagnostics local;
  StepDiagnostics* d = diag ? diag : &local;
  d->degeneracy_ratio = degeneracy_ratio(state.cloud, epsilon);
  d->resampled = d->degeneracy_ratio >= cfg.tau;

  Matrix seeds;
  if (d->resampled) {
    RandomSource rng(seed, streams::per_node(streams::Purpose::Resample, k, 0));
    seeds = resample(state.cloud, epsilon, cfg.jitter_scale, rng, &model, d);
  } else {
    seeds = state.cloud.nodes;
  }

  // Propagate the seed set through the state model (transition indexed by
  // the source step k-1). A seed whose every noise draw leaves the domain is
  // re-drawn from the posterior cloud, like a degenerate node in resampling;
  // without this, one stray tail node would abort the whole realization.
  Matrix next_nodes(seeds.rows(), seeds.cols());
  std::vector<std::uint8_t> stuck(seeds.cols(), 0);
  parallel_for(static_cast<int>(seeds.cols()), cfg.threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      RandomSource rng(seed, streams::per_node(streams::Purpose::Propagate, k, i));
      try {
        next_nodes.col(i) = propagate(model, seeds.col(i), rng, k - 1);
      } catch (const DomainError&) {
        stuck[i] = 1;
      }
    }
  });
  for (Index i = 0; i < static_cast<Index>(stuck.size()); ++i) {
    if (!stuck[i]) continue;
    RandomSource rng(seed, streams::per_node(streams::Purpose::Rescue, k, i));
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const Vector donor = draw_weighted_node(state.cloud, rng);
      if (!model.in_domain(donor)) continue;
      try {
        next_nodes.col(i) = propagate(model, donor, rng, k - 1);
        placed = true;
      } catch (const DomainError&) {
      }
    }
    if (!placed) throw DomainError("filter_step: no viable seed for node", seeds.col(i));
    ++d->rescued_nodes;
  }

  const Vector prior = predict(state, next_nodes, model, cfg, seed, k, d);
  Vector posterior = bayes_update(prior, next_nodes, observation, model, k);

  PointCloud cloud;
  cloud.step = k;
  cloud.nodes = std::move(next_nodes);
  cloud.values = std::move(posterior);
  return FilterState::from_cloud(std::move(cloud));
}

}  // namespace meshfree
