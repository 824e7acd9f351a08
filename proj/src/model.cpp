#include "meshfree/model.hpp"

#include <cmath>

namespace meshfree {

namespace {

inline Real fd_step(Real xi) { return std::max(1e-6, 1e-6 * std::abs(xi)); }

template <typename Fn>
Matrix central_difference(const Fn& f, const Vector& at, Index out_dim) {
  Matrix jac(out_dim, at.size());
  Vector lo = at, hi = at;
  for (Index i = 0; i < at.size(); ++i) {
    const Real h = fd_step(at[i]);
    hi[i] = at[i] + h;
    lo[i] = at[i] - h;
    jac.col(i) = (f(hi) - f(lo)) / (2.0 * h);
    hi[i] = at[i];
    lo[i] = at[i];
  }
  return jac;
}

}  // namespace

Matrix transition_jacobian(const StateSpaceModel& model, const Vector& x, const Vector& w, int k) {
  if (model.transition_jacobian_x) return model.transition_jacobian_x(x, w, k);
  return central_difference([&](const Vector& xx) { return model.transition(xx, w, k); }, x,
                            model.state_dim);
}

Matrix transition_noise_jacobian(const StateSpaceModel& model, const Vector& x, const Vector& w,
                                 int k) {
  if (model.transition_jacobian_w) return model.transition_jacobian_w(x, w, k);
  return central_difference([&](const Vector& ww) { return model.transition(x, ww, k); }, w,
                            model.state_dim);
}

Matrix observation_jacobian(const StateSpaceModel& model, const Vector& x, int k) {
  if (model.observe_jacobian_x) return model.observe_jacobian_x(x, k);
  return central_difference([&](const Vector& xx) { return model.observe(xx, k); }, x,
                            model.obs_dim);
}

Matrix observation_noise_cov(const StateSpaceModel& model) {
  const Matrix noise = model.obs_noise.covariance_matrix();
  return model.obs_scale.asDiagonal() * noise * model.obs_scale.asDiagonal();
}

Real observation_loglik(const StateSpaceModel& model, const Vector& x, const Vector& y, int k) {
  const Vector predicted = model.observe(x, k);
  const Vector diff = y - predicted;
  if (model.obs_noise.diagonal) {
    // Diagonal fast path: variances scaled componentwise by obs_scale^2.
    const auto var = model.obs_noise.variances.array() * model.obs_scale.array().square();
    constexpr Real kLog2Pi = 1.8378770664093454836;
    return -0.5 * (static_cast<Real>(diff.size()) * kLog2Pi + var.log().sum() +
                   (diff.array().square() / var).sum());
  }
  return gaussian_logpdf(GaussianSpec::Full(predicted, observation_noise_cov(model)), y);
}

Vector propagate(const StateSpaceModel& model, const Vector& x, RandomSource& rng, int k) {
  for (int attempt = 0; attempt <= model.max_noise_retries; ++attempt) {
    const Vector w = sample_gaussian(model.state_noise, rng);
    Vector next = model.transition(x, w, k);
    if (model.in_domain(next)) return next;
  }
  throw DomainError("propagate: no in-domain successor within retry cap", x);
}

}  // namespace meshfree
