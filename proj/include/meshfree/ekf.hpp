#pragma once

#include <stdexcept>

#include "meshfree/model.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

struct EkfBelief {
  Vector mean;
  Matrix covariance;  // symmetric positive semidefinite
};

// Standard extended Kalman step: the mean is pushed through the zero-noise
// transition, the covariance through the transition Jacobian plus the
// noise-Jacobian-scaled process covariance; the update uses the observation
// Jacobian at the predicted mean with a Joseph-form covariance update.
// Throws std::runtime_error when the innovation covariance is not positive
// definite.
EkfBelief ekf_step(const EkfBelief& belief, const StateSpaceModel& model,
                   const Vector& observation, int k);

}  // namespace meshfree
