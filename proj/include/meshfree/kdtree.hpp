#pragma once

#include <cstdint>
#include <vector>

#include "meshfree/types.hpp"

namespace meshfree {

struct Neighbor {
  int index;      // column in the source matrix
  Real distance;  // Euclidean
};

// Immutable exact k-nearest-neighbor index over a fixed point set (one
// column per point). Results are the L points minimizing Euclidean distance,
// ties broken by lower column index; the answer is therefore independent of
// the tree layout. Small sets are scanned linearly.
class KnnIndex {
 public:
  enum class Mode { Auto, Tree, Linear };
  static constexpr int kLinearScanThreshold = 256;

  explicit KnnIndex(const Matrix& points, Mode mode = Mode::Auto);

  int size() const { return count_; }
  Index dim() const { return dim_; }

  // Throws std::invalid_argument if L < 1 or L > size().
  std::vector<Neighbor> query(const Vector& x, int L) const;
  // Allocation-free variant for hot loops; `out` is overwritten.
  void query(const Vector& x, int L, std::vector<Neighbor>& out) const;

 private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    Real split = 0.0;
    int right = -1;      // index of the right child; left child is self+1
    int begin = 0, end = 0;
  };

  int build(int begin, int end);
  void search(int node, const Real* q, int L, std::vector<Neighbor>& heap) const;
  void scan_range(int begin, int end, const Real* q, int L, std::vector<Neighbor>& heap) const;

  Index dim_ = 0;
  int count_ = 0;
  bool linear_ = false;
  std::vector<Real> pts_;      // row-major, reordered during build
  std::vector<int> orig_;      // reordered position -> source column
  std::vector<Node> nodes_;
};

inline std::vector<Neighbor> knn_query(const KnnIndex& index, const Vector& x, int L) {
  return index.query(x, L);
}

}  // namespace meshfree
