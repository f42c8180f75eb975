#include "l1codec/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace l1codec {

IndexSet::IndexSet(std::vector<Index> indices, Index universe)
    : indices_(std::move(indices)), universe_(universe) {
  if (universe_ < 0) {
    throw DimensionError("IndexSet: negative universe");
  }
  Index prev = -1;
  for (Index i : indices_) {
    if (i <= prev) {
      throw DimensionError("IndexSet: indices must be strictly increasing");
    }
    if (i < 0 || i >= universe_) {
      throw DimensionError("IndexSet: index " + std::to_string(i) +
                           " outside universe of size " +
                           std::to_string(universe_));
    }
    prev = i;
  }
}

IndexSet IndexSet::all(Index universe) {
  std::vector<Index> idx(static_cast<std::size_t>(universe));
  for (Index i = 0; i < universe; ++i) {
    idx[static_cast<std::size_t>(i)] = i;
  }
  return IndexSet(std::move(idx), universe);
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite entries");
  }
}

Matrix sample_gaussian_matrix(Index rows, Index cols, double variance,
                              SeededRng& rng) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("sample_gaussian_matrix: dimensions must be >= 1");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw DimensionError("sample_gaussian_matrix: variance must be positive");
  }
  const double stddev = std::sqrt(variance);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = rng.normal(0.0, stddev);
    }
  }
  return m;
}

Matrix annihilator(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m <= n) {
    throw DimensionError("annihilator: need strictly more rows than columns");
  }
  require_finite(a, "annihilator");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < n) {
    throw RankError("annihilator: matrix is rank-deficient (rank " +
                    std::to_string(qr.rank()) + " < " + std::to_string(n) +
                    ")");
  }
  // Full Q of the pivoted QR; its trailing m-n columns span the cokernel.
  Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  return q.rightCols(m - n).transpose();
}

Matrix submatrix_columns(const Matrix& f, const IndexSet& t) {
  if (t.universe() != f.cols()) {
    throw DimensionError("submatrix_columns: index universe " +
                         std::to_string(t.universe()) +
                         " does not match column count " +
                         std::to_string(f.cols()));
  }
  Matrix out(f.rows(), t.size());
  Index k = 0;
  for (Index j : t.indices()) {
    out.col(k++) = f.col(j);
  }
  return out;
}

EigPair extremal_eigs_gram(const Matrix& m) {
  if (m.rows() < m.cols()) {
    throw DimensionError("extremal_eigs_gram: need rows >= cols");
  }
  if (m.cols() == 0) {
    throw DimensionError("extremal_eigs_gram: empty matrix");
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  return {smin * smin, smax * smax};
}

Vector solve_gram_system(const Matrix& f_t, const Vector& c) {
  if (f_t.cols() != c.size()) {
    throw DimensionError("solve_gram_system: size mismatch");
  }
  const Matrix gram = f_t.transpose() * f_t;
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw SingularityError("solve_gram_system: factorization failed");
  }
  Vector x = ldlt.solve(c);
  // One refinement step keeps the residual near machine precision.
  x += ldlt.solve(c - gram * x);
  const double cnorm = c.norm();
  const double resid = (gram * x - c).norm();
  if (!x.allFinite() || resid > 1e-10 * (cnorm > 0.0 ? cnorm : 1.0)) {
    throw SingularityError(
        "solve_gram_system: Gram matrix singular to working precision");
  }
  return x;
}

}  // namespace l1codec
