#include <doctest.h>

#include <cmath>

#include "l1codec/linalg.hpp"
#include "l1codec/rng.hpp"

using namespace l1codec;

TEST_CASE("identical seeds reproduce the matrix bit for bit") {
  SeededRng rng_a(7);
  SeededRng rng_b(7);
  const Matrix a = sample_gaussian_matrix(2, 2, 1.0, rng_a);
  const Matrix b = sample_gaussian_matrix(2, 2, 1.0, rng_b);
  REQUIRE(a.rows() == 2);
  REQUIRE(a.cols() == 2);
  CHECK(a.allFinite());
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      CHECK(a(i, j) == b(i, j));
    }
  }
}

TEST_CASE("sample mean stays within four standard errors") {
  SeededRng rng(1);
  const Matrix m = sample_gaussian_matrix(100, 200, 1.0 / 100.0, rng);
  const double mean = m.sum() / (100.0 * 200.0);
  const double standard_error = 0.1 / std::sqrt(100.0 * 200.0);
  CHECK(std::abs(mean) <= 4.0 * standard_error);
}

TEST_CASE("columns with variance 1/p have near-unit squared norm") {
  SeededRng rng(3);
  const Matrix m = sample_gaussian_matrix(100, 200, 1.0 / 100.0, rng);
  double mean_sq = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    mean_sq += m.col(j).squaredNorm();
  }
  mean_sq /= static_cast<double>(m.cols());
  CHECK(mean_sq >= 0.8);
  CHECK(mean_sq <= 1.2);
}

TEST_CASE("invalid dimensions and variance are rejected") {
  SeededRng rng(1);
  CHECK_THROWS_AS(sample_gaussian_matrix(0, 2, 1.0, rng), DimensionError);
  CHECK_THROWS_AS(sample_gaussian_matrix(2, 0, 1.0, rng), DimensionError);
  CHECK_THROWS_AS(sample_gaussian_matrix(2, 2, 0.0, rng), DimensionError);
  CHECK_THROWS_AS(sample_gaussian_matrix(2, 2, -1.0, rng), DimensionError);
}

TEST_CASE("normal stream has the right first two moments") {
  SeededRng rng(11);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("uniform01 lies in [0, 1)") {
  SeededRng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below() is in range and deterministic") {
  SeededRng rng_a(9);
  SeededRng rng_b(9);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng_a.below(17);
    CHECK(v < 17);
    CHECK(v == rng_b.below(17));
  }
}

TEST_CASE("seed splitting gives stable, distinct child streams") {
  const auto s0 = split_seed(42, 0);
  const auto s1 = split_seed(42, 1);
  CHECK(s0 == split_seed(42, 0));
  CHECK(s0 != s1);
  CHECK(split_seed(42, 7) != split_seed(43, 7));

  SeededRng child_a(split_seed(42, 1));
  SeededRng child_b(split_seed(42, 2));
  int equal = 0;
  for (int i = 0; i < 64; ++i) {
    equal += child_a.next_u64() == child_b.next_u64() ? 1 : 0;
  }
  CHECK(equal == 0);
}
