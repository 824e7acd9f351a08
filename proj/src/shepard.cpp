#include "meshfree/shepard.hpp"

#include <cmath>
#include <stdexcept>

namespace meshfree {

Vector shepard_weights(const Vector& distances, const ShepardConfig& cfg) {
  const Index L = distances.size();
  if (L < 1) throw std::invalid_argument("shepard_weights: empty distance list");
  if ((distances.array() < 0.0).any())
    throw std::invalid_argument("shepard_weights: negative distance");

  for (Index l = 0; l < L; ++l) {
    if (distances[l] <= cfg.exact_hit_radius) {
      Vector w = Vector::Zero(L);
      w[l] = 1.0;
      return w;
    }
  }

  Vector w(L);
  if (cfg.mode == WeightMode::PaperLiteral) {
    w = distances;
  } else {
    w = distances.array().pow(-cfg.idw_exponent);
  }
  return w / w.sum();
}

Real evaluate_density(const KnnIndex& index, const Vector& values, const Vector& x,
                      const ShepardConfig& cfg, std::vector<Neighbor>& scratch) {
  index.query(x, cfg.neighbors, scratch);
  const Index L = static_cast<Index>(scratch.size());
  Vector dists(L);
  for (Index l = 0; l < L; ++l) dists[l] = scratch[l].distance;
  const Vector w = shepard_weights(dists, cfg);
  Real acc = 0.0;
  for (Index l = 0; l < L; ++l) acc += w[l] * values[scratch[l].index];
  return acc;
}

Real evaluate_density(const KnnIndex& index, const Vector& values, const Vector& x,
                      const ShepardConfig& cfg) {
  std::vector<Neighbor> scratch;
  return evaluate_density(index, values, x, cfg, scratch);
}

}  // namespace meshfree
