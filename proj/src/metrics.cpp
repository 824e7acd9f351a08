#include "meshfree/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace meshfree {

Real step_error(const Vector& estimate, const Vector& truth) {
  if (estimate.size() != truth.size())
    throw std::invalid_argument("step_error: dimension mismatch");
  return (estimate - truth).norm();
}

Real global_rmse(const std::vector<ErrorSeries>& series) {
  if (series.empty()) throw std::invalid_argument("global_rmse: no realizations");
  const size_t steps = series.front().errors.size();
  if (steps == 0) throw std::invalid_argument("global_rmse: empty series");
  Real acc = 0.0;
  for (const ErrorSeries& s : series) {
    if (s.errors.size() != steps)
      throw std::invalid_argument("global_rmse: inconsistent series length");
    for (Real e : s.errors) acc += e * e;
  }
  return std::sqrt(acc / (static_cast<Real>(series.size()) * static_cast<Real>(steps)));
}

}  // namespace meshfree
