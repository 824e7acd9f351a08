#include <doctest.h>

#include <cmath>

#include "meshfree/random.hpp"

using namespace meshfree;

TEST_CASE("draws are a pure function of (seed, stream, index)") {
  RandomSource a(42, 7);
  RandomSource b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  CHECK(RandomSource::normal_at(1, 2, 3) == RandomSource::normal_at(1, 2, 3));
  CHECK(RandomSource::uniform_at(9, 0, 12) == RandomSource::uniform_at(9, 0, 12));
}

TEST_CASE("different seeds, streams and indices decorrelate") {
  CHECK(RandomSource::normal_at(1, 0, 0) != RandomSource::normal_at(2, 0, 0));
  CHECK(RandomSource::normal_at(1, 0, 0) != RandomSource::normal_at(1, 1, 0));
  CHECK(RandomSource::normal_at(1, 0, 0) != RandomSource::normal_at(1, 0, 1));
}

TEST_CASE("uniform draws live strictly inside (0,1)") {
  RandomSource rng(3, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal moments over 1e6 draws") {
  RandomSource rng(2024, 5);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("chi-squared goodness of fit on 1e5 normal draws") {
  // 20 equal-probability bins; critical value chi2_{19}(0.999) = 43.8202.
  const double edges[] = {-1.6448536269514729, -1.2815515655446004, -1.0364333894937898,
                          -0.84162123357291418, -0.67448975019608171, -0.52440051270804089,
                          -0.38532046640756773, -0.25334710313579972, -0.12566134685507402,
                          0.0, 0.12566134685507416, 0.25334710313579972, 0.38532046640756773,
                          0.52440051270804067, 0.67448975019608171, 0.8416212335729143,
                          1.0364333894937898, 1.2815515655446004, 1.6448536269514722};
  const int bins = 20;
  const int n = 100000;
  int counts[20] = {0};
  RandomSource rng(77, 3);
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    int b = 0;
    while (b < bins - 1 && z > edges[b]) ++b;
    ++counts[b];
  }
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double diff = counts[b] - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < 43.82019596451753);
}

TEST_CASE("distinct streams on the same seed are uncorrelated") {
  const int n = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = RandomSource::normal_at(123, 1, i);
    const double y = RandomSource::normal_at(123, 2, i);
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  CHECK(std::abs(cov / std::sqrt(vx * vy)) < 0.01);
}
