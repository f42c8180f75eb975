#include <doctest.h>

#include <cmath>

#include "l1codec/linalg.hpp"
#include "l1codec/rng.hpp"

using namespace l1codec;

namespace {

// Power-iteration oracle for the extreme eigenvalues of M^T M, independent
// of the SVD route used by the library.
double power_lambda_max(const Matrix& gram, SeededRng& rng) {
  Vector v(gram.rows());
  for (Index i = 0; i < v.size(); ++i) {
    v(i) = rng.normal();
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Vector w = gram * v;
    const double next = w.norm();
    w /= next;
    if (std::abs(next - lambda) <= 1e-14 * std::max(1.0, next)) {
      v = w;
      lambda = next;
      break;
    }
    v = w;
    lambda = next;
  }
  return lambda;
}

EigPair power_iteration_oracle(const Matrix& m, SeededRng& rng) {
  const Matrix gram = m.transpose() * m;
  const double lmax = power_lambda_max(gram, rng);
  // Shifted iteration: largest eigenvalue of (lmax I - G) is lmax - lmin.
  const Matrix shifted =
      Matrix(lmax * Matrix::Identity(gram.rows(), gram.cols()) - gram);
  const double spread = power_lambda_max(shifted, rng);
  return {lmax - spread, lmax};
}

Matrix orthonormal_columns(Index rows, Index cols, SeededRng& rng) {
  const Matrix g = sample_gaussian_matrix(rows, rows, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, rows);
  return q.leftCols(cols);
}

}  // namespace

TEST_CASE("annihilator of a coordinate axis is the other axis") {
  Matrix a(2, 1);
  a << 1.0, 0.0;
  const Matrix f = annihilator(a);
  REQUIRE(f.rows() == 1);
  REQUIRE(f.cols() == 2);
  CHECK(std::abs(f(0, 0)) <= 1e-12);
  CHECK(std::abs(std::abs(f(0, 1)) - 1.0) <= 1e-12);
}

TEST_CASE("annihilator has orthonormal rows and kills the range") {
  SeededRng rng(21);
  const Matrix a = sample_gaussian_matrix(4, 2, 1.0, rng);
  const Matrix f = annihilator(a);
  REQUIRE(f.rows() == 2);
  REQUIRE(f.cols() == 4);
  CHECK((f * a).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK((f * f.transpose() - Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>()
        <= 1e-10);
}

TEST_CASE("annihilated observations depend only on the error vector") {
  SeededRng rng(22);
  const Matrix a = sample_gaussian_matrix(8, 4, 1.0, rng);
  const Matrix f = annihilator(a);
  Vector e = Vector::Zero(8);
  e(3) = 1.7;
  e(6) = -0.4;
  for (int rep = 0; rep < 5; ++rep) {
    Vector plain(4);
    for (Index i = 0; i < 4; ++i) {
      plain(i) = rng.normal();
    }
    const Vector lhs = f * (a * plain + e);
    const Vector rhs = f * e;
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("annihilator properties hold across random shapes") {
  SeededRng rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    const Index m = 2 + static_cast<Index>(rng.below(63));  // 2..64
    const Index n = 1 + static_cast<Index>(rng.below(
                            static_cast<std::uint64_t>(m - 1)));
    const Matrix a = sample_gaussian_matrix(m, n, 1.0, rng);
    const Matrix f = annihilator(a);
    REQUIRE(f.rows() == m - n);
    CHECK((f * a).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((f * f.transpose() - Matrix::Identity(m - n, m - n))
              .lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("annihilator rejects rank-deficient input") {
  Matrix a(4, 2);
  SeededRng rng(24);
  for (Index i = 0; i < 4; ++i) {
    a(i, 0) = rng.normal();
    a(i, 1) = 2.0 * a(i, 0);
  }
  CHECK_THROWS_AS(annihilator(a), RankError);
  Matrix square(3, 3);
  square.setIdentity();
  CHECK_THROWS_AS(annihilator(square), DimensionError);
}

TEST_CASE("submatrix_columns selects the requested columns") {
  const Matrix eye = Matrix::Identity(3, 3);
  const Matrix picked = submatrix_columns(eye, IndexSet({0, 2}, 3));
  REQUIRE(picked.cols() == 2);
  CHECK(picked.col(0) == eye.col(0));
  CHECK(picked.col(1) == eye.col(2));

  SeededRng rng(31);
  const Matrix f = sample_gaussian_matrix(4, 6, 1.0, rng);
  CHECK(submatrix_columns(f, IndexSet::all(6)) == f);

  const Matrix sub = submatrix_columns(f, IndexSet({1, 3, 5}, 6));
  REQUIRE(sub.rows() == 4);
  REQUIRE(sub.cols() == 3);
  const Index wanted[] = {1, 3, 5};
  for (Index k = 0; k < 3; ++k) {
    for (Index i = 0; i < 4; ++i) {
      CHECK(sub(i, k) == f(i, wanted[k]));
    }
  }
}

TEST_CASE("index sets validate their contents") {
  CHECK_THROWS_AS(IndexSet({1, 7}, 6), DimensionError);
  CHECK_THROWS_AS(IndexSet({2, 2}, 6), DimensionError);
  CHECK_THROWS_AS(IndexSet({3, 1}, 6), DimensionError);
  SeededRng rng(32);
  const Matrix f = sample_gaussian_matrix(4, 6, 1.0, rng);
  CHECK_THROWS_AS(submatrix_columns(f, IndexSet({0}, 5)), DimensionError);
}

TEST_CASE("extremal gram eigenvalues: orthonormal and degenerate cases") {
  SeededRng rng(41);
  const Matrix q = orthonormal_columns(6, 3, rng);
  const EigPair ortho = extremal_eigs_gram(q);
  CHECK(std::abs(ortho.min - 1.0) <= 1e-12);
  CHECK(std::abs(ortho.max - 1.0) <= 1e-12);

  Matrix twin(4, 2);
  Vector u(4);
  for (Index i = 0; i < 4; ++i) {
    u(i) = rng.normal();
  }
  u.normalize();
  twin.col(0) = u;
  twin.col(1) = u;
  const EigPair degenerate = extremal_eigs_gram(twin);
  CHECK(std::abs(degenerate.min - 0.0) <= 1e-12);
  CHECK(std::abs(degenerate.max - 2.0) <= 1e-12);
}

TEST_CASE("extremal gram eigenvalues match the power-iteration oracle") {
  SeededRng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix m = sample_gaussian_matrix(6, 3, 1.0, rng);
    const EigPair got = extremal_eigs_gram(m);
    const EigPair oracle = power_iteration_oracle(m, rng);
    CHECK(got.min >= -1e-12);
    CHECK(std::abs(got.max - oracle.max) <= 1e-8 * std::max(1.0, oracle.max));
    CHECK(std::abs(got.min - oracle.min) <= 1e-8 * std::max(1.0, oracle.max));
  }
}

TEST_CASE("solve_gram_system solves and refines") {
  SeededRng rng(51);
  const Matrix q = orthonormal_columns(7, 4, rng);
  Vector c(4);
  c << 0.3, -1.2, 4.0, 0.01;
  CHECK((solve_gram_system(q, c) - c).lpNorm<Eigen::Infinity>() <= 1e-12);

  Matrix one(1, 1);
  one << 2.0;
  Vector rhs(1);
  rhs << 4.0;
  CHECK(solve_gram_system(one, rhs)(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve_gram_system agrees with an explicit small inverse") {
  SeededRng rng(52);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix f_t = sample_gaussian_matrix(5, 3, 1.0, rng);
    const Matrix gram = f_t.transpose() * f_t;
    // Explicit adjugate inverse of the 3x3 Gram matrix.
    Matrix adj(3, 3);
    adj(0, 0) = gram(1, 1) * gram(2, 2) - gram(1, 2) * gram(2, 1);
    adj(0, 1) = gram(0, 2) * gram(2, 1) - gram(0, 1) * gram(2, 2);
    adj(0, 2) = gram(0, 1) * gram(1, 2) - gram(0, 2) * gram(1, 1);
    adj(1, 0) = gram(1, 2) * gram(2, 0) - gram(1, 0) * gram(2, 2);
    adj(1, 1) = gram(0, 0) * gram(2, 2) - gram(0, 2) * gram(2, 0);
    adj(1, 2) = gram(0, 2) * gram(1, 0) - gram(0, 0) * gram(1, 2);
    adj(2, 0) = gram(1, 0) * gram(2, 1) - gram(1, 1) * gram(2, 0);
    adj(2, 1) = gram(0, 1) * gram(2, 0) - gram(0, 0) * gram(2, 1);
    adj(2, 2) = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
    const double det = gram(0, 0) * adj(0, 0) + gram(0, 1) * adj(1, 0) +
                       gram(0, 2) * adj(2, 0);
    if (std::abs(det) < 1e-6) {
      continue;
    }
    Vector c(3);
    for (Index i = 0; i < 3; ++i) {
      c(i) = rng.normal();
    }
    const Vector expected = adj * c / det;
    const Vector got = solve_gram_system(f_t, c);
    CHECK((got - expected).lpNorm<Eigen::Infinity>() <=
          1e-9 * std::max(1.0, expected.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("solve_gram_system flags singular Gram matrices") {
  SeededRng rng(53);
  Matrix twin(6, 2);
  Vector u(6);
  for (Index i = 0; i < 6; ++i) {
    u(i) = rng.normal();
  }
  twin.col(0) = u;
  twin.col(1) = u;
  Vector c(2);
  c << 1.0, -1.0;
  CHECK_THROWS_AS(solve_gram_system(twin, c), SingularityError);
}

TEST_CASE("require_finite rejects NaN") {
  Matrix bad(2, 2);
  bad.setZero();
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(require_finite(bad, "test"), DimensionError);
}
