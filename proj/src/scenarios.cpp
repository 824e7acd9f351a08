#include "meshfree/scenarios.hpp"

#include <cmath>

namespace meshfree {

namespace {

inline Vector tumor_drift(const Vector& x, const TumorParams& p) {
  Vector f(2);
  f[0] = p.alpha1 * x[0] * std::log(x[1] / x[0]);
  f[1] = p.alpha2 * x[0] - p.alpha3 * x[1] * std::pow(x[0], 2.0 / 3.0);
  return f;
}

// Principal-branch arctan of z/den with atan(z/0) := sign(z)*pi/2 and
// atan(0/0) := 0.
inline Real guarded_atan(Real z, Real den) {
  if (den == 0.0) {
    if (z == 0.0) return 0.0;
    return std::copysign(M_PI / 2.0, z);
  }
  return std::atan(z / den);
}

}  // namespace

Vector tumor_transition(const Vector& x, const Vector& w, Discretization mode,
                        const TumorParams& p) {
  const Vector step = tumor_drift(x, p) * p.dt + (p.sigma.array() * w.array()).matrix();
  if (mode == Discretization::Euler) return x + step;
  return step;
}

Matrix tumor_transition_jacobian(const Vector& x, Discretization mode, const TumorParams& p) {
  Matrix drift_jac(2, 2);
  drift_jac(0, 0) = p.alpha1 * (std::log(x[1] / x[0]) - 1.0);
  drift_jac(0, 1) = p.alpha1 * x[0] / x[1];
  drift_jac(1, 0) = p.alpha2 - (2.0 / 3.0) * p.alpha3 * x[1] * std::pow(x[0], -1.0 / 3.0);
  drift_jac(1, 1) = -p.alpha3 * std::pow(x[0], 2.0 / 3.0);
  if (mode == Discretization::Euler) return Matrix::Identity(2, 2) + p.dt * drift_jac;
  return p.dt * drift_jac;
}

Vector bearing_transition(const Vector& x, const Vector& w, const BearingParams& p) {
  Vector next(6);
  next[0] = x[0] + x[3] * p.dt;
  next[1] = x[1] + std::sin(p.alpha * x[4]) * p.dt;
  next[2] = x[2] + x[5] * x[5] * p.dt;
  next[3] = x[3] + p.controls[0] * p.dt;
  next[4] = x[4] + p.controls[1] * p.dt;
  next[5] = x[5] + p.controls[2] * p.dt;
  return next + (p.sigma.array() * w.array()).matrix();
}

Matrix bearing_transition_jacobian(const Vector& x, const BearingParams& p) {
  Matrix jac = Matrix::Identity(6, 6);
  jac(0, 3) = p.dt;
  jac(1, 4) = p.alpha * std::cos(p.alpha * x[4]) * p.dt;
  jac(2, 5) = 2.0 * x[5] * p.dt;
  return jac;
}

Vector bearing_observe(const Vector& x, const BearingParams& p) {
  const Real dx1 = x[0] - p.platform1[0];
  const Real dy1 = x[1] - p.platform1[1];
  const Real dx2 = x[0] - p.platform2[0];
  const Real dy2 = x[1] - p.platform2[1];
  Vector y(4);
  y[0] = guarded_atan(x[2], std::sqrt(dx1 * dx1 + dy1 * dy1));
  y[1] = guarded_atan(x[2], std::sqrt(dx2 * dx2 + dy2 * dy2));
  y[2] = guarded_atan(dx1, dy1);
  y[3] = guarded_atan(dx2, dy2);
  return y;
}

Scenario tumor_scenario(const TumorParams& p) {
  Scenario s;
  s.name = "tumor";
  s.steps = p.steps;
  s.dt = p.dt;
  s.x0 = p.x0;
  s.initial = GaussianSpec::Diagonal(p.init_mean, p.init_var);

  StateSpaceModel& m = s.model;
  m.state_dim = 2;
  m.state_noise_dim = 2;
  m.obs_dim = 2;
  m.obs_noise_dim = 2;
  m.state_noise = GaussianSpec::Isotropic(2, p.dt);
  m.obs_noise = GaussianSpec::Isotropic(2, p.dt);
  m.obs_scale = p.obs_scale;
  m.transition = [p](const Vector& x, const Vector& w, int) {
    return tumor_transition(x, w, p.mode, p);
  };
  m.transition_jacobian_x = [p](const Vector& x, const Vector&, int) {
    return tumor_transition_jacobian(x, p.mode, p);
  };
  m.transition_jacobian_w = [p](const Vector&, const Vector&, int) -> Matrix {
    return p.sigma.asDiagonal();
  };
  m.observe = [](const Vector& x, int) { return x; };
  m.observe_jacobian_x = [](const Vector&, int) -> Matrix { return Matrix::Identity(2, 2); };
  m.domain_guard = [](const Vector& x) { return x[0] > 0.0 && x[1] > 0.0; };

  FilterConfig& fc = s.filter_defaults;
  fc.node_count = p.default_nodes;
  fc.noise_samples = p.default_noise_samples;
  fc.shepard.neighbors = default_neighbor_count(2);
  s.default_particles = 10000;
  return s;
}

Scenario bearing_scenario(const BearingParams& p) {
  Scenario s;
  s.name = "bearing";
  s.steps = p.steps;
  s.dt = p.dt;
  s.x0 = p.x0;
  s.initial = GaussianSpec::Diagonal(p.x0, p.init_var);

  StateSpaceModel& m = s.model;
  m.state_dim = 6;
  m.state_noise_dim = 6;
  m.obs_dim = 4;
  m.obs_noise_dim = 4;
  m.state_noise = GaussianSpec::Isotropic(6, p.dt);
  m.obs_noise = GaussianSpec::Isotropic(4, p.dt);
  m.obs_scale = p.obs_scale;
  m.transition = [p](const Vector& x, const Vector& w, int) { return bearing_transition(x, w, p); };
  m.transition_jacobian_x = [p](const Vector& x, const Vector&, int) {
    return bearing_transition_jacobian(x, p);
  };
  m.transition_jacobian_w = [p](const Vector&, const Vector&, int) -> Matrix {
    return p.sigma.asDiagonal();
  };
  m.observe = [p](const Vector& x, int) { return bearing_observe(x, p); };

  FilterConfig& fc = s.filter_defaults;
  fc.node_count = p.default_nodes;
  fc.noise_samples = p.default_noise_samples;
  fc.shepard.neighbors = default_neighbor_count(6);
  s.default_particles = p.default_particles;
  return s;
}

Scenario linear_gaussian_scenario(const LinearGaussianParams& p) {
  Scenario s;
  s.dt = p.dt;
  s.steps = p.steps;
  s.linear = true;

  Matrix a, c;
  Vector sigma, obs_scale, x0, init_mean, init_var;
  if (p.dim == 1) {
    s.name = "linear_gaussian";
    a = Matrix::Constant(1, 1, 0.98);
    c = Matrix::Identity(1, 1);
    sigma = Vector::Constant(1, 0.03);
    obs_scale = Vector::Constant(1, 0.5);
    x0 = Vector::Constant(1, 0.3);
    init_mean = Vector::Zero(1);
    init_var = Vector::Constant(1, 0.25);
  } else if (p.dim == 2) {
    s.name = "linear_gaussian_2d";
    a.resize(2, 2);
    a << 0.97, 0.05, -0.05, 0.95;
    c = Matrix::Identity(2, 2);
    sigma = Vector::Constant(2, 0.03);
    obs_scale = Vector::Constant(2, 0.5);
    x0.resize(2);
    x0 << 0.3, -0.2;
    init_mean = Vector::Zero(2);
    init_var = Vector::Constant(2, 0.25);
  } else {
    throw std::invalid_argument("linear_gaussian_scenario: dim must be 1 or 2");
  }

  const Index d = a.rows();
  s.x0 = x0;
  s.initial = GaussianSpec::Diagonal(init_mean, init_var);
  s.lin_transition = a;
  s.lin_observation = c;

  StateSpaceModel& m = s.model;
  m.state_dim = d;
  m.state_noise_dim = d;
  m.obs_dim = d;
  m.obs_noise_dim = d;
  m.state_noise = GaussianSpec::Isotropic(d, p.dt);
  m.obs_noise = GaussianSpec::Isotropic(d, p.dt);
  m.obs_scale = obs_scale;
  m.transition = [a, sigma](const Vector& x, const Vector& w, int) -> Vector {
    return a * x + (sigma.array() * w.array()).matrix();
  };
  m.transition_jacobian_x = [a](const Vector&, const Vector&, int) { return a; };
  m.transition_jacobian_w = [sigma](const Vector&, const Vector&, int) -> Matrix {
    return sigma.asDiagonal();
  };
  m.observe = [c](const Vector& x, int) -> Vector { return c * x; };
  m.observe_jacobian_x = [c](const Vector&, int) { return c; };

  FilterConfig& fc = s.filter_defaults;
  fc.node_count = 2000;
  fc.noise_samples = 20;
  fc.shepard.neighbors = default_neighbor_count(d);
  s.default_particles = 100000;
  return s;
}

TruthRecord simulate_truth(const Scenario& scenario, RandomSource rng) {
  const Index d = scenario.model.state_dim;
  const Index q = scenario.model.obs_dim;
  const int steps = scenario.steps;

  TruthRecord record;
  record.states.resize(d, steps + 1);
  record.observations.resize(q, steps);
  record.states.col(0) = scenario.x0;

  for (int k = 1; k <= steps; ++k) {
    record.states.col(k) = propagate(scenario.model, record.states.col(k - 1), rng, k - 1);
    const Vector v = sample_gaussian(scenario.model.obs_noise, rng);
    record.observations.col(k - 1) =
        scenario.model.observe(record.states.col(k), k) +
        (scenario.model.obs_scale.array() * v.array()).matrix();
  }
  return record;
}

}  // namespace meshfree
