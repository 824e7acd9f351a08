#include "meshfree/newton.hpp"

#include <cmath>

namespace meshfree {

namespace {

constexpr int kMaxHalvings = 30;

template <typename OnAccept>
SolveResult solve_impl(const StateSpaceModel& model, const Vector& target, const Vector& w, int k,
                       const Vector& guess, const SolveConfig& cfg, OnAccept&& on_accept) {
  SolveResult result;
  Vector x = guess;
  Vector residual = model.transition(x, w, k) - target;
  Real norm = residual.lpNorm<Eigen::Infinity>();
  on_accept(norm);

  if (norm <= cfg.residual_tol) {
    result.root = std::move(x);
    result.residual_norm = norm;
    result.converged = true;
    return result;
  }

  Eigen::PartialPivLU<Matrix> lu;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    Matrix jac = transition_jacobian(model, x, w, k);
    lu.compute(jac);
    // Near-singular factor: nudge the diagonal and refactor.
    const auto udiag = lu.matrixLU().diagonal().cwiseAbs();
    if (udiag.minCoeff() <= 1e-14 * std::max(Real(1), udiag.maxCoeff())) {
      jac.diagonal() += 1e-10 * (Vector::Ones(jac.rows()) + jac.diagonal().cwiseAbs());
      lu.compute(jac);
    }
    const Vector direction = lu.solve(-residual);

    Real lambda = cfg.damping;
    bool accepted = false;
    Vector candidate, cand_residual;
    Real cand_norm = 0.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      candidate = x + lambda * direction;
      if (model.in_domain(candidate)) {
        cand_residual = model.transition(candidate, w, k) - target;
        cand_norm = cand_residual.lpNorm<Eigen::Infinity>();
        if (cand_norm < norm) {
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) break;  // stalled; report the best point seen

    x = std::move(candidate);
    residual = std::move(cand_residual);
    norm = cand_norm;
    result.iterations = iter;
    on_accept(norm);
    if (norm <= cfg.residual_tol) break;
  }

  result.root = std::move(x);
  result.residual_norm = norm;
  result.converged = norm <= cfg.residual_tol;
  return result;
}

}  // namespace

SolveResult implicit_solve(const StateSpaceModel& model, const Vector& target, const Vector& w,
                           int k, const Vector& guess, const SolveConfig& cfg) {
  return solve_impl(model, target, w, k, guess, cfg, [](Real) {});
}

SolveResult implicit_solve_traced(const StateSpaceModel& model, const Vector& target,
                                  const Vector& w, int k, const Vector& guess,
                                  const SolveConfig& cfg, std::vector<Real>& residuals) {
  residuals.clear();
  return solve_impl(model, target, w, k, guess, cfg,
                    [&](Real r) { residuals.push_back(r); });
}

}  // namespace meshfree
