#include <doctest.h>

#include <cmath>
#include <vector>

#include "meshfree/newton.hpp"
#include "meshfree/scenarios.hpp"

using namespace meshfree;

namespace {

StateSpaceModel shift_model() {  // x' = x + w
  StateSpaceModel m;
  m.state_dim = 1;
  m.state_noise_dim = 1;
  m.transition = [](const Vector& x, const Vector& w, int) -> Vector { return x + w; };
  m.transition_jacobian_x = [](const Vector&, const Vector&, int) -> Matrix {
    return Matrix::Identity(1, 1);
  };
  m.state_noise = GaussianSpec::Isotropic(1, 1.0);
  return m;
}

// Independent 2D root search: nested grid refinement of the forward map
// around a starting box, no derivatives involved.
Vector grid_refine_root(const StateSpaceModel& model, const Vector& target, const Vector& w,
                        const Vector& center, Real half_width) {
  Vector best = center;
  Real best_norm = std::numeric_limits<Real>::max();
  Vector lo = center.array() - half_width;
  Vector hi = center.array() + half_width;
  for (int round = 0; round < 30; ++round) {
    const int g = 21;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        Vector x(2);
        x[0] = lo[0] + (hi[0] - lo[0]) * i / (g - 1);
        x[1] = lo[1] + (hi[1] - lo[1]) * j / (g - 1);
        if (x[0] <= 0.0 || x[1] <= 0.0) continue;
        const Real norm = (model.transition(x, w, 0) - target).lpNorm<Eigen::Infinity>();
        if (norm < best_norm) {
          best_norm = norm;
          best = x;
        }
      }
    }
    const Vector span = 0.25 * (hi - lo);
    lo = best - span;
    hi = best + span;
  }
  return best;
}

}  // namespace

TEST_CASE("a linear shift model inverts in one iteration") {
  const auto model = shift_model();
  Vector target(1), w(1);
  target << 1.0;
  w << 0.2;
  const SolveResult res = implicit_solve(model, target, w, 0, target, SolveConfig{});
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.root[0] == 0.8);
}

TEST_CASE("the identity map returns the target unchanged") {
  StateSpaceModel m;
  m.state_dim = 2;
  m.transition = [](const Vector& x, const Vector&, int) { return x; };
  Vector target(2), w(2);
  target << 0.3, -0.6;
  w << 5.0, -2.0;
  const SolveResult res = implicit_solve(m, target, w, 0, target, SolveConfig{});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.root == target);
}

TEST_CASE("tumor pre-image recovery with a grid-refinement cross-check") {
  TumorParams params;
  params.sigma = Vec<2>{0.0, 0.0};
  const Scenario s = tumor_scenario(params);
  Vector x(2), w(2);
  x << 0.8, 0.3;
  w.setZero();
  const Vector target = s.model.transition(x, w, 0);  // manufactured pre-image

  SolveConfig cfg;
  const SolveResult res = implicit_solve(s.model, target, w, 0, target, cfg);
  CHECK(res.converged);
  CHECK((res.root - x).lpNorm<Eigen::Infinity>() < 1e-8);

  const Vector cross = grid_refine_root(s.model, target, w, target, 0.5);
  CHECK((s.model.transition(cross, w, 0) - target).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK((res.root - cross).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("round-trip recovery over random tumor states") {
  const Scenario s = tumor_scenario();
  RandomSource rng(321, 0);
  SolveConfig cfg;
  int converged = 0;
  const int trials = 1000;
  int median_accum = 0;
  std::vector<int> iterations;
  for (int t = 0; t < trials; ++t) {
    Vector x(2), w(2);
    x << 0.1 + 1.2 * rng.uniform(), 0.1 + 1.2 * rng.uniform();
    w << rng.normal() * std::sqrt(0.2), rng.normal() * std::sqrt(0.2);
    const Vector target = s.model.transition(x, w, 0);
    if (!s.model.in_domain(target)) continue;
    const SolveResult res = implicit_solve(s.model, target, w, 0, target, cfg);
    if (res.converged && (res.root - x).lpNorm<Eigen::Infinity>() <= 1e-6) ++converged;
    iterations.push_back(res.iterations);
  }
  CHECK(converged >= static_cast<int>(0.999 * iterations.size()));
  std::sort(iterations.begin(), iterations.end());
  CHECK(iterations[iterations.size() / 2] <= 6);
  (void)median_accum;
}

TEST_CASE("accepted residual norms decrease strictly") {
  const Scenario s = tumor_scenario();
  Vector x(2), w(2);
  x << 0.5, 0.7;
  w << 0.4, -0.3;
  const Vector target = s.model.transition(x, w, 0);
  std::vector<Real> residuals;
  const SolveResult res =
      implicit_solve_traced(s.model, target, w, 0, target, SolveConfig{}, residuals);
  CHECK(res.converged);
  REQUIRE(residuals.size() >= 2);
  for (size_t i = 1; i < residuals.size(); ++i) CHECK(residuals[i] < residuals[i - 1]);
}

TEST_CASE("unreachable targets are reported, not thrown") {
  StateSpaceModel m;  // saturating map, range (-1,1)
  m.state_dim = 1;
  m.transition = [](const Vector& x, const Vector&, int) -> Vector {
    Vector out(1);
    out[0] = std::tanh(x[0]);
    return out;
  };
  Vector target(1), w(1);
  target << 3.0;
  w << 0.0;
  SolveConfig cfg;
  cfg.max_iters = 25;
  const SolveResult res = implicit_solve(m, target, w, 0, Vector::Zero(1), cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.residual_norm > cfg.residual_tol);
}

TEST_CASE("singular Jacobians are perturbed instead of crashing") {
  StateSpaceModel m;  // rank-one map
  m.state_dim = 2;
  m.transition = [](const Vector& x, const Vector&, int) -> Vector {
    Vector out(2);
    out[0] = x[0] + x[1];
    out[1] = x[0] + x[1];
    return out;
  };
  Vector target(2), w(2);
  target << 1.0, 1.0;  // on the range manifold
  w.setZero();
  const SolveResult res = implicit_solve(m, target, w, 0, Vector::Zero(2), SolveConfig{});
  CHECK(res.converged);
  CHECK((m.transition(res.root, w, 0) - target).lpNorm<Eigen::Infinity>() <= 1e-10);
}
