#include "l1codec/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace l1codec {

DecodeResult decode_l1(const Matrix& a, const Vector& y,
                       const ToleranceSettings& tol) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (y.size() != m) {
    throw DimensionError("decode_l1: received word length mismatch");
  }

  LinearProgram lp;
  lp.c = Vector::Zero(n + m);
  lp.c.tail(m).setOnes();
  lp.ineq_matrix.resize(2 * m, n + m);
  lp.ineq_matrix.topLeftCorner(m, n) = -a;
  lp.ineq_matrix.bottomLeftCorner(m, n) = a;
  lp.ineq_matrix.topRightCorner(m, m) = -Matrix::Identity(m, m);
  lp.ineq_matrix.bottomRightCorner(m, m) = -Matrix::Identity(m, m);
  lp.ineq_rhs.resize(2 * m);
  lp.ineq_rhs.head(m) = -y;
  lp.ineq_rhs.tail(m) = y;
  lp.pattern = ConstraintPattern::SignedResidual;

  LpSolution sol = solve_lp(lp, tol);

  DecodeResult result;
  result.status = sol.status;
  result.f_hat = sol.x.head(n);
  result.e_hat = y - a * result.f_hat;
  result.objective = result.e_hat.lpNorm<1>();
  if (sol.ineq_duals.size() == 2 * m) {
    result.residual_duals = sol.ineq_duals.head(m) - sol.ineq_duals.tail(m);
  }
  return result;
}

BasisPursuitResult basis_pursuit(const Matrix& f, const Vector& y_tilde,
                                 const ToleranceSettings& tol) {
  const Index p = f.rows();
  const Index m = f.cols();
  if (y_tilde.size() != p) {
    throw DimensionError("basis_pursuit: rhs length mismatch");
  }

  LinearProgram lp;
  lp.c = Vector::Ones(2 * m);
  lp.ineq_matrix = -Matrix::Identity(2 * m, 2 * m);
  lp.ineq_rhs = Vector::Zero(2 * m);
  lp.eq_matrix.resize(p, 2 * m);
  lp.eq_matrix.leftCols(m) = f;
  lp.eq_matrix.rightCols(m) = -f;
  lp.eq_rhs = y_tilde;
  lp.pattern = ConstraintPattern::NonnegOrthant;

  LpSolution sol = solve_lp(lp, tol);

  BasisPursuitResult result;
  result.status = sol.status;
  result.d = sol.x.head(m) - sol.x.tail(m);
  result.duals = std::move(sol.eq_duals);
  return result;
}

namespace {

// Sufficient condition for a unique l1 minimizer: the subgradient is
// strictly below 1 off the support and the support columns are linearly
// independent.
bool looks_unique(const Matrix& f, const Vector& d,
                  const Vector& subgradient) {
  const double scale = std::max(1.0, d.lpNorm<Eigen::Infinity>());
  std::vector<Index> support;
  for (Index i = 0; i < d.size(); ++i) {
    if (std::abs(d(i)) > 1e-7 * scale) {
      support.push_back(i);
    } else if (std::abs(subgradient(i)) > 1.0 - 1e-6) {
      return false;  // zero coefficient with an active dual: face, not vertex
    }
  }
  if (support.empty()) {
    return true;
  }
  if (static_cast<Index>(support.size()) > f.rows()) {
    return false;
  }
  Matrix cols(f.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    cols.col(static_cast<Index>(k)) = f.col(support[k]);
  }
  Eigen::JacobiSVD<Matrix> svd(cols);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > 1e-8 * sv(0);
}

}  // namespace

bool decode_equivalence_check(const Matrix& a, const Vector& f,
                              const Vector& e, SeededRng& rng) {
  const Vector y = a * f + e;
  const DecodeResult dec = decode_l1(a, y);
  const Matrix ann = annihilator(a);
  const Vector y_tilde = ann * y;
  const BasisPursuitResult bp = basis_pursuit(ann, y_tilde);
  if (dec.status != LpStatus::Optimal || bp.status != LpStatus::Optimal) {
    return false;
  }

  const double bp_obj = bp.d.lpNorm<1>();
  const double obj_scale = std::max(1.0, bp_obj);
  if (std::abs(dec.objective - bp_obj) > 1e-6 * obj_scale) {
    return false;
  }

  const Vector bp_subgrad = -ann.transpose() * bp.duals;
  // The decode-side minimizer of ||d||_1 over F d = y_tilde is e_hat itself;
  // its subgradient comes from the residual duals.
  const bool unique_bp = looks_unique(ann, bp.d, bp_subgrad);
  const bool unique_dec = looks_unique(ann, dec.e_hat, dec.residual_duals);
  if (!unique_bp || !unique_dec) {
    return true;  // objectives agree; minimizers may differ on a face
  }

  // Confirm the vertex by re-solving under a random column permutation; a
  // unique optimum must come back unchanged.
  const Index m = ann.cols();
  std::vector<Index> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = m - 1; i > 0; --i) {
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  Matrix shuffled(ann.rows(), m);
  for (Index j = 0; j < m; ++j) {
    shuffled.col(j) = ann.col(perm[static_cast<std::size_t>(j)]);
  }
  const BasisPursuitResult probe = basis_pursuit(shuffled, y_tilde);
  if (probe.status != LpStatus::Optimal) {
    return false;
  }
  Vector unshuffled(m);
  for (Index j = 0; j < m; ++j) {
    unshuffled(perm[static_cast<std::size_t>(j)]) = probe.d(j);
  }
  if ((unshuffled - bp.d).lpNorm<Eigen::Infinity>() > 1e-6) {
    return (dec.e_hat - bp.d).lpNorm<Eigen::Infinity>() <= 1e-6 ||
           std::abs(dec.objective - bp_obj) <= 1e-6 * obj_scale;
  }

  return (dec.e_hat - bp.d).lpNorm<Eigen::Infinity>() <= 1e-6;
}

}  // namespace l1codec
