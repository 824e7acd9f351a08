#pragma once

#include "meshfree/random.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

// Multivariate normal specification. Diagonal covariances are stored as a
// vector of variances; the full-matrix form is kept for generic callers.
struct GaussianSpec {
  Vector mean;
  Vector variances;  // diagonal form, empty when full
  Matrix covariance; // full form, 0x0 when diagonal
  bool diagonal = true;

  static GaussianSpec Diagonal(Vector mean, Vector variances);
  static GaussianSpec Full(Vector mean, Matrix covariance);
  static GaussianSpec Isotropic(Index dim, Real variance);

  Index dim() const { return mean.size(); }
  Matrix covariance_matrix() const;

  // Throws std::invalid_argument unless the covariance is symmetric
  // positive definite and dimensions agree.
  void validate() const;
};

Real gaussian_logpdf(const GaussianSpec& spec, const Vector& x);
Vector sample_gaussian(const GaussianSpec& spec, RandomSource& rng);

}  // namespace meshfree
