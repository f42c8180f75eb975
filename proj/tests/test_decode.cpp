#include <doctest.h>

#include <cmath>

#include "l1codec/decode.hpp"
#include "l1codec/rip.hpp"
#include "support/test_util.hpp"

using namespace l1codec;

TEST_CASE("uncorrupted words decode exactly") {
  SeededRng rng(81);
  const Matrix a = sample_gaussian_matrix(12, 6, 1.0, rng);
  const Vector f = testutil::random_vector(6, rng);
  const DecodeResult result = decode_l1(a, a * f);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK((result.f_hat - f).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(result.objective <= 1e-6);
}

TEST_CASE("a single corrupted entry is corrected") {
  SeededRng rng(82);
  const Matrix a = sample_gaussian_matrix(16, 8, 1.0, rng);
  const Vector f = testutil::random_vector(8, rng);
  Vector e = Vector::Zero(16);
  e(5) = 3.5;
  const Vector y = a * f + e;
  const DecodeResult result = decode_l1(a, y);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK((result.f_hat - f).lpNorm<Eigen::Infinity>() <= 1e-6);

  // The sparse-search oracle agrees that e is the unique sparsest
  // explanation of the annihilated observations.
  const Matrix ann = annihilator(a);
  const L0Result l0 = l0_decode_bruteforce(ann, ann * y, 1);
  CHECK(l0.unique);
  CHECK((l0.d - e).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((result.e_hat - l0.d).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("e_hat is the residual and the objective is its l1 norm") {
  SeededRng rng(83);
  const Matrix a = sample_gaussian_matrix(14, 5, 1.0, rng);
  Vector e = Vector::Zero(14);
  e(2) = -1.0;
  e(9) = 0.7;
  e(11) = 2.2;
  const Vector y = a * testutil::random_vector(5, rng) + e;
  const DecodeResult result = decode_l1(a, y);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK((result.e_hat - (y - a * result.f_hat)).lpNorm<Eigen::Infinity>() <=
        1e-9);
  CHECK(result.objective ==
        doctest::Approx(result.e_hat.lpNorm<1>()).epsilon(1e-12));
}

TEST_CASE("half-corruption ambiguity: tied objectives, no exactness") {
  SeededRng rng(84);
  const Index n = 6;
  const Index m = 2 * n;
  // First code column has unit-magnitude entries, so swapping half of the
  // received word between two plaintexts that differ along coordinate 0
  // costs the same l1 error on either side of the tie.
  Matrix a = sample_gaussian_matrix(m, n, 1.0, rng);
  for (Index i = 0; i < m; ++i) {
    a(i, 0) = (rng.next_u64() & 1u) ? 1.0 : -1.0;
  }
  const Vector f = testutil::random_vector(n, rng);
  Vector f_alt = f;
  const double delta = 2.0;
  f_alt(0) += delta;

  Vector y(m);
  for (Index i = 0; i < m; ++i) {
    y(i) = (i < n) ? a.row(i).dot(f) : a.row(i).dot(f_alt);
  }
  const double obj_f = (y - a * f).lpNorm<1>();
  const double obj_alt = (y - a * f_alt).lpNorm<1>();
  CHECK(std::abs(obj_f - obj_alt) <= 1e-8);

  const DecodeResult result = decode_l1(a, y);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK(result.objective <= obj_f + 1e-8);
}

TEST_CASE("objective never beats an explicit competitor") {
  SeededRng rng(85);
  const Matrix a = sample_gaussian_matrix(10, 4, 1.0, rng);
  Vector e = Vector::Zero(10);
  e(1) = 0.9;
  e(7) = -2.0;
  const Vector y = a * testutil::random_vector(4, rng) + e;
  const DecodeResult result = decode_l1(a, y);
  REQUIRE(result.status == LpStatus::Optimal);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector g0 = testutil::random_vector(4, rng);
    CHECK(result.objective <= (y - a * g0).lpNorm<1>() + 1e-9);
  }
}

TEST_CASE("first-order optimality certificate from the duals") {
  SeededRng rng(86);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix a = sample_gaussian_matrix(12, 5, 1.0, rng);
    Vector e = Vector::Zero(12);
    e(rep) = 1.5;
    e(rep + 4) = -0.6;
    const Vector y = a * testutil::random_vector(5, rng) + e;
    const DecodeResult result = decode_l1(a, y);
    REQUIRE(result.status == LpStatus::Optimal);
    const Vector& u = result.residual_duals;
    REQUIRE(u.size() == 12);
    CHECK(u.lpNorm<Eigen::Infinity>() <= 1.0 + 1e-6);
    CHECK((a.transpose() * u).lpNorm<Eigen::Infinity>() <= 1e-6);
    for (Index i = 0; i < 12; ++i) {
      if (std::abs(result.e_hat(i)) > 1e-6) {
        CHECK(u(i) == doctest::Approx(result.e_hat(i) > 0 ? 1.0 : -1.0)
                          .epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("decoding commutes with positive scaling") {
  SeededRng rng(87);
  const Matrix a = sample_gaussian_matrix(14, 6, 1.0, rng);
  Vector e = Vector::Zero(14);
  e(3) = 1.1;
  e(8) = -0.2;
  const Vector y = a * testutil::random_vector(6, rng) + e;
  const double lambda = 3.7;
  const DecodeResult base = decode_l1(a, y);
  const DecodeResult scaled = decode_l1(a, lambda * y);
  REQUIRE(base.status == LpStatus::Optimal);
  REQUIRE(scaled.status == LpStatus::Optimal);
  const double scale =
      std::max(1.0, (lambda * base.f_hat).lpNorm<Eigen::Infinity>());
  CHECK((scaled.f_hat - lambda * base.f_hat).lpNorm<Eigen::Infinity>() <=
        1e-8 * scale);
}

TEST_CASE("basis pursuit through an identity matrix returns the data") {
  SeededRng rng(88);
  const Matrix eye = Matrix::Identity(5, 5);
  const Vector y = testutil::random_vector(5, rng);
  const BasisPursuitResult bp = basis_pursuit(eye, y);
  REQUIRE(bp.status == LpStatus::Optimal);
  CHECK((bp.d - y).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("basis pursuit on a 1x2 system attains the analytic optimum") {
  Matrix f(1, 2);
  f << 1.0, 1.0;
  Vector y(1);
  y << 1.0;
  const BasisPursuitResult bp = basis_pursuit(f, y);
  REQUIRE(bp.status == LpStatus::Optimal);
  // Optimal value is 1 on a whole segment; only the value is asserted.
  CHECK(bp.d.lpNorm<1>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(f.row(0).dot(bp.d) - 1.0) <= 1e-8);
}

TEST_CASE("basis pursuit recovers a planted spike") {
  SeededRng rng(89);
  const Matrix f = sample_gaussian_matrix(8, 16, 1.0 / 8.0, rng);
  Vector e = Vector::Zero(16);
  e(11) = -2.4;
  const BasisPursuitResult bp = basis_pursuit(f, f * e);
  REQUIRE(bp.status == LpStatus::Optimal);
  CHECK((bp.d - e).lpNorm<Eigen::Infinity>() <= 1e-6);

  const L0Result l0 = l0_decode_bruteforce(f, f * e, 1);
  CHECK(l0.unique);
  CHECK((l0.d - e).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("basis pursuit always satisfies its equality constraints") {
  SeededRng rng(90);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix f = sample_gaussian_matrix(6, 14, 1.0 / 6.0, rng);
    const Vector dense = testutil::random_vector(14, rng);
    const Vector y = f * dense;
    const BasisPursuitResult bp = basis_pursuit(f, y);
    REQUIRE(bp.status == LpStatus::Optimal);
    CHECK((f * bp.d - y).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("basis pursuit flags inconsistent systems") {
  Matrix f(2, 1);
  f << 1.0, 1.0;
  Vector y(2);
  y << 1.0, 2.0;
  const BasisPursuitResult bp = basis_pursuit(f, y);
  CHECK(bp.status == LpStatus::Infeasible);
}

TEST_CASE("the two decoding routes agree") {
  SeededRng rng(91);
  const Matrix a = sample_gaussian_matrix(16, 8, 1.0, rng);
  const Vector f = testutil::random_vector(8, rng);

  SUBCASE("zero error") {
    CHECK(decode_equivalence_check(a, f, Vector::Zero(16), rng));
  }
  SUBCASE("recoverable sparse error") {
    Vector e = Vector::Zero(16);
    e(4) = 2.0;
    e(13) = -1.3;
    CHECK(decode_equivalence_check(a, f, e, rng));
  }
  SUBCASE("dense unrecoverable error still ties on objective") {
    const Vector e = testutil::random_vector(16, rng);
    CHECK(decode_equivalence_check(a, f, e, rng));
  }
}
