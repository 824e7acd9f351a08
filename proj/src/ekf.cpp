#include "meshfree/ekf.hpp"

namespace meshfree {

EkfBelief ekf_step(const EkfBelief& belief, const StateSpaceModel& model,
                   const Vector& observation, int k) {
  const Index d = belief.mean.size();
  const Vector zero_noise = Vector::Zero(model.state_noise_dim);

  // Predict (transition indexed by the source step k-1).
  const Matrix f_jac = transition_jacobian(model, belief.mean, zero_noise, k - 1);
  const Matrix w_jac = transition_noise_jacobian(model, belief.mean, zero_noise, k - 1);
  const Vector predicted_mean = model.transition(belief.mean, zero_noise, k - 1);
  const Matrix process_cov = w_jac * model.state_noise.covariance_matrix() * w_jac.transpose();
  Matrix predicted_cov = f_jac * belief.covariance * f_jac.transpose() + process_cov;
  predicted_cov = 0.5 * (predicted_cov + predicted_cov.transpose());

  // Update.
  const Matrix h_jac = observation_jacobian(model, predicted_mean, k);
  const Matrix r_eff = observation_noise_cov(model);
  const Matrix innovation_cov = h_jac * predicted_cov * h_jac.transpose() + r_eff;
  Eigen::LLT<Matrix> llt(innovation_cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("ekf_step: innovation covariance not positive definite");

  const Matrix gain = llt.solve(h_jac * predicted_cov).transpose();
  const Vector innovation = observation - model.observe(predicted_mean, k);

  EkfBelief next;
  next.mean = predicted_mean + gain * innovation;
  const Matrix identity_minus = Matrix::Identity(d, d) - gain * h_jac;
  next.covariance = identity_minus * predicted_cov * identity_minus.transpose() +
                    gain * r_eff * gain.transpose();
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose());
  return next;
}

}  // namespace meshfree
