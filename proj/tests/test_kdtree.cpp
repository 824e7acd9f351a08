#include <doctest.h>

#include <algorithm>
#include <vector>

#include "meshfree/kdtree.hpp"
#include "meshfree/random.hpp"

using namespace meshfree;

namespace {

// Exhaustive reference: squared distances, sorted by (d2, index).
std::vector<Neighbor> brute_force(const Matrix& pts, const Vector& q, int L) {
  struct Entry {
    int index;
    Real d2;
  };
  std::vector<Entry> all;
  for (int i = 0; i < pts.cols(); ++i) {
    Real d2 = 0.0;
    for (Index j = 0; j < pts.rows(); ++j) {
      const Real diff = pts(j, i) - q[j];
      d2 += diff * diff;
    }
    all.push_back({i, d2});
  }
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.index < b.index;
  });
  std::vector<Neighbor> out;
  for (int l = 0; l < L; ++l) out.push_back({all[l].index, std::sqrt(all[l].d2)});
  return out;
}

Matrix random_points(Index d, int n, std::uint64_t seed) {
  Matrix pts(d, n);
  RandomSource rng(seed, 0);
  for (int i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) pts(j, i) = rng.uniform();
  return pts;
}

}  // namespace

TEST_CASE("nearest point on a line") {
  Matrix pts(1, 3);
  pts << 0.0, 1.0, 2.0;
  const KnnIndex index(pts);
  const auto res = index.query(Vector::Constant(1, 0.9), 1);
  REQUIRE(res.size() == 1);
  CHECK(res[0].index == 1);
  CHECK(res[0].distance == doctest::Approx(0.1));
}

TEST_CASE("equidistant tie goes to the lower index") {
  Matrix pts(1, 3);
  pts << 0.0, 5.0, 2.0;
  const KnnIndex index(pts);
  const auto res = index.query(Vector::Constant(1, 1.0), 1);
  CHECK(res[0].index == 0);

  // Duplicate points: ordering must follow the column index.
  Matrix dup(2, 4);
  dup << 1, 1, 1, 1, 2, 2, 2, 2;
  const KnnIndex dup_index(dup);
  const auto all = dup_index.query(Vector::Zero(2), 4);
  for (int l = 0; l < 4; ++l) CHECK(all[l].index == l);
}

TEST_CASE("queries match an exhaustive scan in 6D") {
  const Matrix pts = random_points(6, 1000, 99);
  const KnnIndex tree(pts, KnnIndex::Mode::Tree);
  const KnnIndex linear(pts, KnnIndex::Mode::Linear);
  RandomSource rng(100, 1);
  for (int t = 0; t < 100; ++t) {
    Vector q(6);
    for (int j = 0; j < 6; ++j) q[j] = rng.uniform();
    const auto expected = brute_force(pts, q, 8);
    const auto from_tree = tree.query(q, 8);
    const auto from_linear = linear.query(q, 8);
    REQUIRE(from_tree.size() == expected.size());
    for (size_t l = 0; l < expected.size(); ++l) {
      CHECK(from_tree[l].index == expected[l].index);
      CHECK(from_tree[l].distance == expected[l].distance);
      CHECK(from_linear[l].index == expected[l].index);
      CHECK(from_linear[l].distance == expected[l].distance);
    }
  }
}

TEST_CASE("rebuilding from the same nodes reproduces the answers") {
  const Matrix pts = random_points(3, 512, 7);
  const KnnIndex a(pts), b(pts);
  RandomSource rng(8, 2);
  for (int t = 0; t < 20; ++t) {
    Vector q(3);
    for (int j = 0; j < 3; ++j) q[j] = rng.uniform();
    const auto ra = a.query(q, 5);
    const auto rb = b.query(q, 5);
    for (size_t l = 0; l < ra.size(); ++l) {
      CHECK(ra[l].index == rb[l].index);
      CHECK(ra[l].distance == rb[l].distance);
    }
  }
}

TEST_CASE("L beyond the node count is an error") {
  const Matrix pts = random_points(2, 10, 3);
  const KnnIndex index(pts);
  CHECK_THROWS_AS(index.query(Vector::Zero(2), 11), std::invalid_argument);
  CHECK_THROWS_AS(index.query(Vector::Zero(2), 0), std::invalid_argument);
  CHECK_NOTHROW(index.query(Vector::Zero(2), 10));
}
