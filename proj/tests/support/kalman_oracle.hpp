#pragma once

// Exact Kalman filter used as a test oracle. Deliberately self-contained:
// it takes raw system matrices and never touches the library's model or
// filter code paths.

#include <Eigen/Dense>

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Kalman {
  Matrix transition;   // A
  Matrix observation;  // C
  Matrix process_cov;  // Q
  Matrix obs_cov;      // R
  Vector mean;
  Matrix cov;

  void step(const Vector& y) {
    mean = transition * mean;
    cov = transition * cov * transition.transpose() + process_cov;
    const Matrix innovation_cov =
        observation * cov * observation.transpose() + obs_cov;
    const Matrix gain =
        cov * observation.transpose() * innovation_cov.inverse();
    mean += gain * (y - observation * mean);
    const Matrix identity = Matrix::Identity(mean.size(), mean.size());
    cov = (identity - gain * observation) * cov;
    cov = 0.5 * (cov + cov.transpose());
  }

  // Posterior covariance fixed point of the Riccati recursion.
  Matrix steady_state_posterior_cov(int max_iters = 10000, double tol = 1e-15) const {
    Matrix p = cov;
    for (int i = 0; i < max_iters; ++i) {
      Matrix predicted = transition * p * transition.transpose() + process_cov;
      const Matrix innovation_cov =
          observation * predicted * observation.transpose() + obs_cov;
      const Matrix gain =
          predicted * observation.transpose() * innovation_cov.inverse();
      const Matrix identity = Matrix::Identity(p.rows(), p.cols());
      Matrix next = (identity - gain * observation) * predicted;
      next = 0.5 * (next + next.transpose());
      if ((next - p).cwiseAbs().maxCoeff() < tol) return next;
      p = next;
    }
    return p;
  }
};

}  // namespace oracle
