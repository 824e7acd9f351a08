#include "meshfree/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace meshfree {

namespace {

constexpr int kLeafSize = 16;

// Heap entries carry squared distance; lexicographic (d2, index) order makes
// the tie-break exact.
struct HeapLess {
  bool operator()(const Neighbor& a, const Neighbor& b) const {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
  }
};

inline Real sqdist(const Real* a, const Real* b, Index d) {
  Real acc = 0.0;
  for (Index j = 0; j < d; ++j) {
    const Real diff = a[j] - b[j];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

KnnIndex::KnnIndex(const Matrix& points, Mode mode) {
  dim_ = points.rows();
  count_ = static_cast<int>(points.cols());
  pts_.resize(static_cast<size_t>(count_) * dim_);
  orig_.resize(count_);
  for (int i = 0; i < count_; ++i) {
    orig_[i] = i;
    for (Index j = 0; j < dim_; ++j) pts_[static_cast<size_t>(i) * dim_ + j] = points(j, i);
  }
  linear_ = mode == Mode::Linear || (mode == Mode::Auto && count_ < kLinearScanThreshold);
  if (!linear_ && count_ > 0) {
    nodes_.reserve(static_cast<size_t>(2 * count_ / kLeafSize + 2));
    build(0, count_);
  }
}

int KnnIndex::build(int begin, int end) {
  const int self = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[self].begin = begin;
    nodes_[self].end = end;
    return self;
  }

  // Split on the widest axis at the median point.
  int axis = 0;
  Real best_spread = -1.0;
  for (Index j = 0; j < dim_; ++j) {
    Real lo = pts_[static_cast<size_t>(begin) * dim_ + j];
    Real hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      const Real v = pts_[static_cast<size_t>(i) * dim_ + j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = static_cast<int>(j);
    }
  }

  const int mid = begin + (end - begin) / 2;
  std::vector<int> perm(end - begin);
  std::iota(perm.begin(), perm.end(), begin);
  auto key = [&](int i) { return pts_[static_cast<size_t>(i) * dim_ + axis]; };
  std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                   [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
  // Apply the permutation to the backing arrays.
  {
    std::vector<Real> tmp_pts(static_cast<size_t>(end - begin) * dim_);
    std::vector<int> tmp_orig(end - begin);
    for (int i = 0; i < end - begin; ++i) {
      tmp_orig[i] = orig_[perm[i]];
      std::copy_n(&pts_[static_cast<size_t>(perm[i]) * dim_], dim_,
                  &tmp_pts[static_cast<size_t>(i) * dim_]);
    }
    std::copy(tmp_orig.begin(), tmp_orig.end(), orig_.begin() + begin);
    std::copy(tmp_pts.begin(), tmp_pts.end(), pts_.begin() + static_cast<size_t>(begin) * dim_);
  }

  nodes_[self].axis = axis;
  nodes_[self].split = pts_[static_cast<size_t>(mid) * dim_ + axis];
  build(begin, mid);
  nodes_[self].right = build(mid, end);
  return self;
}

void KnnIndex::scan_range(int begin, int end, const Real* q, int L,
                          std::vector<Neighbor>& heap) const {
  const HeapLess less;
  for (int i = begin; i < end; ++i) {
    Neighbor cand{orig_[i], sqdist(&pts_[static_cast<size_t>(i) * dim_], q, dim_)};
    if (static_cast<int>(heap.size()) < L) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), less);
    } else if (less(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), less);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), less);
    }
  }
}

void KnnIndex::search(int node, const Real* q, int L, std::vector<Neighbor>& heap) const {
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    scan_range(n.begin, n.end, q, L, heap);
    return;
  }
  const Real gap = q[n.axis] - n.split;
  const int near = gap < 0.0 ? node + 1 : n.right;
  const int far = gap < 0.0 ? n.right : node + 1;
  search(near, q, L, heap);
  // Visit the far side unless it is strictly outside the current worst
  // radius; equality may still hide a lower-index tie.
  if (static_cast<int>(heap.size()) < L || gap * gap <= heap.front().distance)
    search(far, q, L, heap);
}

void KnnIndex::query(const Vector& x, int L, std::vector<Neighbor>& out) const {
  if (L < 1) throw std::invalid_argument("knn_query: L must be >= 1");
  if (L > count_) throw std::invalid_argument("knn_query: L exceeds node count");
  if (x.size() != dim_) throw std::invalid_argument("knn_query: dimension mismatch");

  out.clear();
  if (static_cast<int>(out.capacity()) < L + 1) out.reserve(L + 1);
  if (linear_)
    scan_range(0, count_, x.data(), L, out);
  else
    search(0, x.data(), L, out);

  std::sort(out.begin(), out.end(), HeapLess{});
  for (Neighbor& nb : out) nb.distance = std::sqrt(nb.distance);
}

std::vector<Neighbor> KnnIndex::query(const Vector& x, int L) const {
  std::vector<Neighbor> out;
  query(x, L, out);
  return out;
}

}  // namespace meshfree
