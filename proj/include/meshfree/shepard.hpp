#pragma once

#include <vector>

#include "meshfree/kdtree.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

enum class WeightMode {
  InverseDistance,  // h_l = d_l^{-p} / sum d_m^{-p}
  PaperLiteral,     // h_l = d_l / sum d_m
};

struct ShepardConfig {
  int neighbors = 4;  // L
  WeightMode mode = WeightMode::InverseDistance;
  Real idw_exponent = 2.0;  // p
  Real exact_hit_radius = 0.0;
};

// L for state dimension d when nothing else is configured.
inline int default_neighbor_count(Index dim) { return std::max<int>(4, 2 * static_cast<int>(dim)); }

// Normalized weights for one query given its neighbor distances in kNN
// order. Any distance within exact_hit_radius short-circuits to an indicator
// on the first such entry, which also keeps the inverse-distance mode total
// at zero distance.
Vector shepard_weights(const Vector& distances, const ShepardConfig& cfg);

// Weighted average of `values` over the L nearest nodes to x.
Real evaluate_density(const KnnIndex& index, const Vector& values, const Vector& x,
                      const ShepardConfig& cfg);

// Scratch-buffer variant for hot loops.
Real evaluate_density(const KnnIndex& index, const Vector& values, const Vector& x,
                      const ShepardConfig& cfg, std::vector<Neighbor>& scratch);

}  // namespace meshfree
