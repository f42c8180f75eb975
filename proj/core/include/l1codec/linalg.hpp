#pragma once

#include <Eigen/Dense>
#include <vector>

#include "l1codec/errors.hpp"
#include "l1codec/rng.hpp"

namespace l1codec {

// Dense column-major real matrices throughout; all hot paths slice columns.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Strictly increasing column indices into a matrix with `universe` columns.
class IndexSet {
 public:
  IndexSet(std::vector<Index> indices, Index universe);

  static IndexSet all(Index universe);

  const std::vector<Index>& indices() const { return indices_; }
  Index universe() const { return universe_; }
  Index size() const { return static_cast<Index>(indices_.size()); }

 private:
  std::vector<Index> indices_;
  Index universe_;
};

// Throws DimensionError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

// rows x cols matrix with i.i.d. N(0, variance) entries, filled in
// column-major order from the given stream.
Matrix sample_gaussian_matrix(Index rows, Index cols, double variance,
                              SeededRng& rng);

// Orthonormal basis of the cokernel of a full-column-rank a (rows > cols):
// returns f of shape (rows - cols) x rows with f * a = 0 and f * f^T = I.
Matrix annihilator(const Matrix& a);

// Columns of f selected by t, order preserved.
Matrix submatrix_columns(const Matrix& f, const IndexSet& t);

struct EigPair {
  double min;
  double max;
};

// Smallest and largest eigenvalues of m^T m, computed from singular values
// so the result is nonnegative even when the Gram matrix is near-singular.
EigPair extremal_eigs_gram(const Matrix& m);

// Solves (f_t^T f_t) x = c with one step of iterative refinement; throws
// SingularityError when the Gram matrix is singular to working precision
// (the delta_{|T|} >= 1 regime).
Vector solve_gram_system(const Matrix& f_t, const Vector& c);

}  // namespace l1codec
