#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "meshfree/gaussian.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

// Discrete state-space model
//   x_k = transition(x_{k-1}, w_{k-1}, k-1),   w ~ state_noise
//   y_k = observe(x_k, k) + obs_scale .* v_k,  v ~ obs_noise
// The noise covariances carry the time step, so every consumer sees one
// source of truth for it. Jacobian callbacks are optional; central finite
// differences are used when they are absent.
struct StateSpaceModel {
  Index state_dim = 0;       // d
  Index state_noise_dim = 0; // r
  Index obs_dim = 0;         // q
  Index obs_noise_dim = 0;   // s

  std::function<Vector(const Vector& x, const Vector& w, int k)> transition;
  std::function<Vector(const Vector& x, int k)> observe;
  std::function<Matrix(const Vector& x, const Vector& w, int k)> transition_jacobian_x;
  std::function<Matrix(const Vector& x, const Vector& w, int k)> transition_jacobian_w;
  std::function<Matrix(const Vector& x, int k)> observe_jacobian_x;
  std::function<bool(const Vector& x)> domain_guard;  // empty = whole space

  GaussianSpec state_noise;
  GaussianSpec obs_noise;
  Vector obs_scale;  // componentwise scale applied to v_k

  int max_noise_retries = 100;

  bool in_domain(const Vector& x) const { return !domain_guard || domain_guard(x); }
};

// Thrown when propagation cannot produce an in-domain successor.
struct DomainError : std::runtime_error {
  Vector node;
  DomainError(std::string msg, Vector node_)
      : std::runtime_error(std::move(msg)), node(std::move(node_)) {}
};

// d x d Jacobian of the transition in x; analytic when supplied, otherwise
// central differences with per-coordinate step max(1e-6, 1e-6*|x_i|).
Matrix transition_jacobian(const StateSpaceModel& model, const Vector& x, const Vector& w, int k);
// d x r Jacobian of the transition in w.
Matrix transition_noise_jacobian(const StateSpaceModel& model, const Vector& x, const Vector& w,
                                 int k);
// q x d Jacobian of the observation map (central differences).
Matrix observation_jacobian(const StateSpaceModel& model, const Vector& x, int k);

// Effective additive observation-noise covariance diag(obs_scale) * Cov(v) * diag(obs_scale).
Matrix observation_noise_cov(const StateSpaceModel& model);
// log p(y | x) under the Gaussian observation model.
Real observation_loglik(const StateSpaceModel& model, const Vector& x, const Vector& y, int k);

// One stochastic step from x. Redraws the noise while the image violates the
// domain guard, up to model.max_noise_retries; throws DomainError after that.
Vector propagate(const StateSpaceModel& model, const Vector& x, RandomSource& rng, int k);

}  // namespace meshfree
