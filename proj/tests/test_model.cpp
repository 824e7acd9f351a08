#include <doctest.h>

#include "meshfree/model.hpp"
#include "meshfree/scenarios.hpp"

using namespace meshfree;

namespace {

StateSpaceModel additive_model(Index d, Real noise_var) {
  StateSpaceModel m;
  m.state_dim = d;
  m.state_noise_dim = d;
  m.obs_dim = d;
  m.obs_noise_dim = d;
  m.transition = [](const Vector& x, const Vector& w, int) -> Vector { return x + w; };
  m.observe = [](const Vector& x, int) { return x; };
  m.state_noise = GaussianSpec::Isotropic(d, noise_var);
  m.obs_noise = GaussianSpec::Isotropic(d, noise_var);
  m.obs_scale = Vector::Ones(d);
  return m;
}

}  // namespace

TEST_CASE("propagate with vanishing noise is the identity map") {
  const auto model = additive_model(2, 1e-30);
  RandomSource rng(1, 0);
  Vector x(2);
  x << 0.4, -1.7;
  CHECK((propagate(model, x, rng, 0) - x).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("propagate is deterministic per (seed, stream, index)") {
  const auto model = additive_model(3, 0.5);
  Vector x = Vector::Zero(3);
  RandomSource a(6, 9), b(6, 9);
  CHECK(propagate(model, x, a, 2) == propagate(model, x, b, 2));
}

TEST_CASE("tumor drift at the nominal start, zero noise") {
  TumorParams params;
  params.sigma = Vec<2>{0.0, 0.0};
  Scenario s = tumor_scenario(params);
  RandomSource rng(1, 0);
  Vector x(2);
  x << 0.8, 0.3;
  const Vector next = propagate(s.model, x, rng, 0);
  CHECK(next[0] == doctest::Approx(0.64306731951812380).epsilon(1e-12));
  CHECK(next[1] == doctest::Approx(0.32165871348784696).epsilon(1e-12));
}

TEST_CASE("propagate reports an unreachable domain") {
  auto model = additive_model(1, 1e-6);
  model.domain_guard = [](const Vector&) { return false; };
  model.max_noise_retries = 10;
  RandomSource rng(4, 0);
  CHECK_THROWS_AS(propagate(model, Vector::Zero(1), rng, 0), DomainError);
}

TEST_CASE("finite-difference Jacobians match analytic ones") {
  SUBCASE("tumor transition") {
    const TumorParams params;
    Vector x(2), w(2);
    x << 0.6, 0.4;
    w << 0.3, -0.2;
    StateSpaceModel numeric;
    numeric.state_dim = 2;
    numeric.transition = [&params](const Vector& xx, const Vector& ww, int) {
      return tumor_transition(xx, ww, Discretization::Euler, params);
    };
    const Matrix fd = transition_jacobian(numeric, x, w, 0);
    const Matrix analytic = tumor_transition_jacobian(x, Discretization::Euler, params);
    CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("bearing transition") {
    const BearingParams params;
    Vector x(6), w(6);
    x << 2, 2, 1, 0.4, 0.4, 0.1;
    w.setZero();
    StateSpaceModel numeric;
    numeric.state_dim = 6;
    numeric.transition = [&params](const Vector& xx, const Vector& ww, int) {
      return bearing_transition(xx, ww, params);
    };
    const Matrix fd = transition_jacobian(numeric, x, w, 0);
    const Matrix analytic = bearing_transition_jacobian(x, params);
    CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("transition purity: identical inputs give identical outputs") {
  const Scenario s = tumor_scenario();
  Vector x(2), w(2);
  x << 0.7, 0.35;
  w << 1.3, -0.8;
  const Vector first = s.model.transition(x, w, 3);
  const Vector second = s.model.transition(x, w, 3);
  CHECK(first == second);
}

TEST_CASE("observation log-likelihood matches the Gaussian density") {
  const Scenario s = tumor_scenario();
  Vector x(2), y(2);
  x << 0.7, 0.35;
  y << 0.72, 0.30;
  // obs noise: diag(R^2 * dt) with R = 0.1, dt = 0.2
  const auto direct = GaussianSpec::Diagonal(x, Vector::Constant(2, 0.01 * 0.2));
  CHECK(observation_loglik(s.model, x, y, 1) ==
        doctest::Approx(gaussian_logpdf(direct, y)).epsilon(1e-12));
}
