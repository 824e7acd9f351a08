#pragma once

#include <vector>

#include "meshfree/model.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

struct SolveConfig {
  Real residual_tol = 1e-10;  // max-norm of transition(x,w,k) - target
  int max_iters = 50;
  Real damping = 1.0;         // initial step factor in (0,1]
  Real fd_step = 1e-6;        // forwarded to finite-difference Jacobians
};

struct SolveResult {
  Vector root;
  Real residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Solves transition(x, w, k) = target for x with damped Newton iterations
// starting from `guess`. Steps that leave the model domain or fail to reduce
// the residual are halved (up to 30 times); a singular Jacobian is nudged on
// its diagonal and refactored. Non-convergence is reported through the
// result, never thrown.
SolveResult implicit_solve(const StateSpaceModel& model, const Vector& target, const Vector& w,
                           int k, const Vector& guess, const SolveConfig& cfg);

// Same iteration, recording the accepted residual norms (initial one first).
SolveResult implicit_solve_traced(const StateSpaceModel& model, const Vector& target,
                                  const Vector& w, int k, const Vector& guess,
                                  const SolveConfig& cfg, std::vector<Real>& residuals);

}  // namespace meshfree
