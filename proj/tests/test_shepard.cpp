#include <doctest.h>

#include "meshfree/random.hpp"
#include "meshfree/shepard.hpp"

using namespace meshfree;

TEST_CASE("single neighbor takes all the weight") {
  ShepardConfig cfg;
  const Vector w = shepard_weights(Vector::Constant(1, 3.7), cfg);
  CHECK(w.size() == 1);
  CHECK(w[0] == 1.0);
}

TEST_CASE("equal distances split evenly in both modes") {
  Vector d(2);
  d << 1.0, 1.0;
  for (auto mode : {WeightMode::InverseDistance, WeightMode::PaperLiteral}) {
    ShepardConfig cfg;
    cfg.mode = mode;
    const Vector w = shepard_weights(d, cfg);
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("distances (1,2): the two modes disagree as printed") {
  Vector d(2);
  d << 1.0, 2.0;
  ShepardConfig idw;
  idw.idw_exponent = 1.0;
  const Vector w_idw = shepard_weights(d, idw);
  CHECK(w_idw[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w_idw[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  ShepardConfig literal;
  literal.mode = WeightMode::PaperLiteral;
  const Vector w_lit = shepard_weights(d, literal);
  CHECK(w_lit[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w_lit[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("weights are a partition of unity") {
  RandomSource rng(42, 0);
  for (int t = 0; t < 200; ++t) {
    const int L = 1 + static_cast<int>(rng.uniform() * 12);
    Vector d(L);
    for (int l = 0; l < L; ++l) d[l] = 0.01 + rng.uniform();
    for (auto mode : {WeightMode::InverseDistance, WeightMode::PaperLiteral}) {
      ShepardConfig cfg;
      cfg.mode = mode;
      const Vector w = shepard_weights(d, cfg);
      CHECK(std::abs(w.sum() - 1.0) < 1e-12);
      CHECK((w.array() >= 0.0).all());
    }
  }
}

TEST_CASE("empty and negative distances are rejected") {
  ShepardConfig cfg;
  CHECK_THROWS_AS(shepard_weights(Vector(), cfg), std::invalid_argument);
  CHECK_THROWS_AS(shepard_weights(Vector::Constant(1, -0.5), cfg), std::invalid_argument);
}

TEST_CASE("evaluate_density trivia") {
  Matrix nodes(1, 3);
  nodes << 0.0, 1.0, 2.0;
  const KnnIndex index(nodes);
  Vector values(3);
  values << 0.0, 1.0, 0.0;

  SUBCASE("exact hit returns the node value") {
    ShepardConfig cfg;
    cfg.neighbors = 2;
    CHECK(evaluate_density(index, values, Vector::Constant(1, 1.0), cfg) == 1.0);
    CHECK(evaluate_density(index, values, Vector::Constant(1, 0.0), cfg) == 0.0);
  }
  SUBCASE("constant values interpolate to the constant") {
    ShepardConfig cfg;
    cfg.neighbors = 3;
    const Vector c = Vector::Constant(3, 0.37);
    CHECK(evaluate_density(index, c, Vector::Constant(1, 0.83), cfg) ==
          doctest::Approx(0.37).epsilon(1e-15));
  }
  SUBCASE("equidistant pair averages") {
    ShepardConfig cfg;
    cfg.neighbors = 2;
    cfg.idw_exponent = 2.0;
    CHECK(evaluate_density(index, values, Vector::Constant(1, 0.5), cfg) ==
          doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("interpolation invariants on random clouds") {
  RandomSource rng(7, 0);
  const Index d = 3;
  const int n = 300;
  Matrix nodes(d, n);
  Vector values(n);
  for (int i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) nodes(j, i) = rng.uniform();
    values[i] = rng.uniform();
  }
  const KnnIndex index(nodes);
  ShepardConfig cfg;
  cfg.neighbors = 6;

  SUBCASE("node exactness at every node") {
    for (int i = 0; i < n; ++i)
      CHECK(evaluate_density(index, values, nodes.col(i), cfg) == values[i]);
  }

  SUBCASE("boundedness by the neighbor values") {
    for (int t = 0; t < 100; ++t) {
      Vector q(d);
      for (Index j = 0; j < d; ++j) q[j] = rng.uniform() * 1.2 - 0.1;
      const auto nb = index.query(q, cfg.neighbors);
      Real lo = values[nb[0].index], hi = lo;
      for (const auto& e : nb) {
        lo = std::min(lo, values[e.index]);
        hi = std::max(hi, values[e.index]);
      }
      const Real v = evaluate_density(index, values, q, cfg);
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }

  SUBCASE("translation equivariance") {
    Vector shift(d);
    shift << 12.25, -3.5, 0.125;  // exactly representable offsets
    Matrix shifted = nodes;
    shifted.colwise() += shift;
    const KnnIndex shifted_index(shifted);
    for (int t = 0; t < 50; ++t) {
      Vector q(d);
      for (Index j = 0; j < d; ++j) q[j] = rng.uniform();
      const Real base = evaluate_density(index, values, q, cfg);
      const Real moved = evaluate_density(shifted_index, values, q + shift, cfg);
      CHECK(std::abs(base - moved) < 1e-12);
    }
  }
}
