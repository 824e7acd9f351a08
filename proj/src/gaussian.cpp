#include "meshfree/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace meshfree {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

GaussianSpec GaussianSpec::Diagonal(Vector mean, Vector variances) {
  GaussianSpec spec;
  spec.mean = std::move(mean);
  spec.variances = std::move(variances);
  spec.diagonal = true;
  spec.validate();
  return spec;
}

GaussianSpec GaussianSpec::Full(Vector mean, Matrix covariance) {
  GaussianSpec spec;
  spec.mean = std::move(mean);
  spec.covariance = std::move(covariance);
  spec.diagonal = false;
  spec.validate();
  return spec;
}

GaussianSpec GaussianSpec::Isotropic(Index dim, Real variance) {
  return Diagonal(Vector::Zero(dim), Vector::Constant(dim, variance));
}

Matrix GaussianSpec::covariance_matrix() const {
  if (diagonal) return variances.asDiagonal();
  return covariance;
}

void GaussianSpec::validate() const {
  if (diagonal) {
    if (variances.size() != mean.size())
      throw std::invalid_argument("GaussianSpec: variance/mean dimension mismatch");
    if ((variances.array() <= 0.0).any())
      throw std::invalid_argument("GaussianSpec: non-positive variance");
    return;
  }
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
    throw std::invalid_argument("GaussianSpec: covariance/mean dimension mismatch");
  if (!covariance.isApprox(covariance.transpose(), 1e-12))
    throw std::invalid_argument("GaussianSpec: covariance not symmetric");
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("GaussianSpec: covariance not positive definite");
}

Real gaussian_logpdf(const GaussianSpec& spec, const Vector& x) {
  if (x.size() != spec.mean.size())
    throw std::invalid_argument("gaussian_logpdf: dimension mismatch");
  const Index d = spec.dim();
  const Vector diff = x - spec.mean;
  if (spec.diagonal) {
    const Real quad = (diff.array().square() / spec.variances.array()).sum();
    const Real logdet = spec.variances.array().log().sum();
    return -0.5 * (d * kLog2Pi + logdet + quad);
  }
  Eigen::LLT<Matrix> llt(spec.covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_logpdf: covariance not positive definite");
  const Vector half = llt.matrixL().solve(diff);
  const Real logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (d * kLog2Pi + logdet + half.squaredNorm());
}

Vector sample_gaussian(const GaussianSpec& spec, RandomSource& rng) {
  const Index d = spec.dim();
  Vector z(d);
  for (Index i = 0; i < d; ++i) z[i] = rng.normal();
  if (spec.diagonal) return spec.mean + (spec.variances.array().sqrt() * z.array()).matrix();
  Eigen::LLT<Matrix> llt(spec.covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sample_gaussian: covariance not positive definite");
  return spec.mean + llt.matrixL() * z;
}

}  // namespace meshfree
