#include "l1codec/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace l1codec {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::IterLimit:
      return "iteration-limit";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  const Index k = c.size();
  if (k < 1) {
    throw DimensionError("LinearProgram: empty objective");
  }
  const Index r = ineq_matrix.rows();
  const Index q = eq_matrix.rows();
  if (r > 0 && ineq_matrix.cols() != k) {
    throw DimensionError("LinearProgram: inequality block column mismatch");
  }
  if (ineq_rhs.size() != r) {
    throw DimensionError("LinearProgram: inequality rhs size mismatch");
  }
  if (q > 0 && eq_matrix.cols() != k) {
    throw DimensionError("LinearProgram: equality block column mismatch");
  }
  if (eq_rhs.size() != q) {
    throw DimensionError("LinearProgram: equality rhs size mismatch");
  }
  if (r == 0 && q == 0) {
    throw DimensionError("LinearProgram: no constraints");
  }
  if (!c.allFinite() || (r > 0 && !ineq_matrix.allFinite()) ||
      !ineq_rhs.allFinite() || (q > 0 && !eq_matrix.allFinite()) ||
      !eq_rhs.allFinite()) {
    throw DimensionError("LinearProgram: non-finite data");
  }
  if (pattern == ConstraintPattern::NonnegOrthant) {
    if (r != k || !ineq_rhs.isZero(0.0) ||
        !ineq_matrix.isApprox(-Matrix::Identity(k, k), 0.0)) {
      throw DimensionError("LinearProgram: NonnegOrthant pattern mismatch");
    }
  } else if (pattern == ConstraintPattern::SignedResidual) {
    if (r % 2 != 0) {
      throw DimensionError("LinearProgram: SignedResidual needs 2m rows");
    }
    const Index m = r / 2;
    const Index n = k - m;
    if (n < 1 ||
        !ineq_matrix.topRightCorner(m, m).isApprox(-Matrix::Identity(m, m),
                                                   0.0) ||
        !ineq_matrix.bottomRightCorner(m, m).isApprox(-Matrix::Identity(m, m),
                                                      0.0) ||
        !ineq_matrix.bottomLeftCorner(m, n).isApprox(
            -ineq_matrix.topLeftCorner(m, n), 0.0)) {
      throw DimensionError("LinearProgram: SignedResidual pattern mismatch");
    }
  }
}

namespace {

// Largest alpha in (0, 1e12] with v + alpha * dv >= 0.
double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1e12;
  for (Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) {
      alpha = std::min(alpha, -v(i) / dv(i));
    }
  }
  return alpha;
}

// Equality-only LP: the feasible set is an affine subspace, so the problem
// is optimal iff the objective is orthogonal to the null space of E.
LpSolution solve_equality_only(const LinearProgram& lp,
                               const ToleranceSettings& tol) {
  const Matrix& e = lp.eq_matrix;
  LpSolution sol;
  sol.ineq_duals = Vector::Zero(0);
  Eigen::ColPivHouseholderQR<Matrix> qr(e);
  Vector x = qr.solve(lp.eq_rhs);
  if ((e * x - lp.eq_rhs).lpNorm<Eigen::Infinity>() >
      tol.feasibility * (1.0 + lp.eq_rhs.lpNorm<Eigen::Infinity>())) {
    sol.status = LpStatus::Infeasible;
    sol.x = std::move(x);
    sol.eq_duals = Vector::Zero(e.rows());
    return sol;
  }
  // y solves E^T y = -c in the least-squares sense; a nonzero residual is a
  // direction of unbounded descent inside the feasible subspace.
  Eigen::ColPivHouseholderQR<Matrix> qrt(Matrix(e.transpose()));
  Vector y = qrt.solve(Vector(-lp.c));
  Vector c_null = lp.c + e.transpose() * y;
  if (c_null.lpNorm<Eigen::Infinity>() >
      1e-10 * (1.0 + lp.c.lpNorm<Eigen::Infinity>())) {
    sol.status = LpStatus::Unbounded;
    sol.x = std::move(x);
    sol.eq_duals = std::move(y);
    return sol;
  }
  sol.status = LpStatus::Optimal;
  sol.x = std::move(x);
  sol.eq_duals = std::move(y);
  sol.objective_value = lp.c.dot(sol.x);
  sol.duality_gap = 0.0;
  return sol;
}

// Per-iteration KKT solver. H = G^T diag(d) G (+ regularization); the three
// patterns factor it in different shapes but expose the same solve.
class KktSolver {
 public:
  KktSolver(const LinearProgram& lp) : lp_(lp) {
    if (lp.pattern == ConstraintPattern::SignedResidual) {
      m_ = lp.ineq_matrix.rows() / 2;
      n_ = lp.num_vars() - m_;
      a_ = -lp.ineq_matrix.topLeftCorner(m_, n_);
    }
  }

  bool prepare(const Vector& d) {
    const Index k = lp_.num_vars();
    switch (lp_.pattern) {
      case ConstraintPattern::NonnegOrthant:
        h_diag_ = d;
        return h_diag_.minCoeff() > 0.0 && prepare_schur_diag();
      case ConstraintPattern::SignedResidual: {
        const auto d1 = d.head(m_);
        const auto d2 = d.tail(m_);
        w_sum_ = d1 + d2;
        v_diff_ = d1 - d2;
        // Schur complement of the diagonal t-block: 4 d1 d2 / (d1 + d2).
        Vector w_eff =
            4.0 * d1.cwiseProduct(d2).cwiseQuotient(w_sum_);
        Matrix scaled = w_eff.cwiseSqrt().asDiagonal() * a_;
        Matrix core(n_, n_);
        core.setZero();
        core.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
        return factor_core(core);
      }
      case ConstraintPattern::General: {
        Matrix scaled = d.cwiseSqrt().asDiagonal() * lp_.ineq_matrix;
        Matrix core(k, k);
        core.setZero();
        core.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
        if (!factor_core(core)) {
          return false;
        }
        if (lp_.eq_matrix.rows() > 0) {
          return prepare_schur_dense();
        }
        return true;
      }
    }
    return false;
  }

  // x := H^{-1} rhs.
  Vector solve_h(const Vector& rhs) const {
    switch (lp_.pattern) {
      case ConstraintPattern::NonnegOrthant:
        return rhs.cwiseQuotient(h_diag_);
      case ConstraintPattern::SignedResidual: {
        Vector r_g = rhs.head(n_);
        Vector r_t = rhs.tail(m_);
        Vector dg = llt_.solve(
            r_g - a_.transpose() * v_diff_.cwiseQuotient(w_sum_)
                                       .cwiseProduct(r_t)
                                       .eval());
        Vector dt =
            (r_t - v_diff_.cwiseProduct(a_ * dg)).cwiseQuotient(w_sum_);
        Vector out(n_ + m_);
        out << dg, dt;
        return out;
      }
      case ConstraintPattern::General:
        return llt_.solve(rhs);
    }
    return rhs;
  }

  // dy := M^{-1} rhs with M = E H^{-1} E^T.
  Vector solve_schur(const Vector& rhs) const { return schur_llt_.solve(rhs); }

 private:
  bool factor_core(Matrix& core) {
    const double trace = core.diagonal().sum();
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (attempt > 0) {
        const double bump = (reg == 0.0)
                                ? std::max(1e-14, 1e-13 * trace / core.rows())
                                : reg * 100.0;
        core.diagonal().array() += bump - reg;
        reg = bump;
      }
      llt_.compute(core.selfadjointView<Eigen::Lower>());
      if (llt_.info() == Eigen::Success) {
        return true;
      }
    }
    return false;
  }

  bool prepare_schur_diag() {
    const Matrix& e = lp_.eq_matrix;
    if (e.rows() == 0) {
      return true;
    }
    Matrix scaled = e * h_diag_.cwiseInverse().cwiseSqrt().asDiagonal();
    Matrix m(e.rows(), e.rows());
    m.setZero();
    m.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    return factor_schur(m);
  }

  bool prepare_schur_dense() {
    const Matrix& e = lp_.eq_matrix;
    Matrix w = llt_.solve(e.transpose());
    Matrix m = e * w;
    m = 0.5 * (m + m.transpose());
    return factor_schur(m);
  }

  bool factor_schur(Matrix& m) {
    const double trace = m.diagonal().sum();
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (attempt > 0) {
        const double bump =
            (reg == 0.0) ? std::max(1e-14, 1e-13 * trace / m.rows())
                         : reg * 100.0;
        m.diagonal().array() += bump - reg;
        reg = bump;
      }
      schur_llt_.compute(m.selfadjointView<Eigen::Lower>());
      if (schur_llt_.info() == Eigen::Success) {
        return true;
      }
    }
    return false;
  }

  const LinearProgram& lp_;
  Index m_ = 0, n_ = 0;
  Matrix a_;
  Vector h_diag_, w_sum_, v_diff_;
  Eigen::LLT<Matrix> llt_;
  Eigen::LLT<Matrix> schur_llt_;
};

struct Candidate {
  Vector x, y, z;
  double objective;
  double gap;
  int iterations;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const ToleranceSettings& tol) {
  lp.validate();
  if (lp.ineq_matrix.rows() == 0) {
    return solve_equality_only(lp, tol);
  }

  const Index k = lp.num_vars();
  const Index r = lp.ineq_matrix.rows();
  const Index q = lp.eq_matrix.rows();
  const Matrix& g = lp.ineq_matrix;
  const Matrix& e = lp.eq_matrix;
  const Vector& h = lp.ineq_rhs;
  const Vector& b = lp.eq_rhs;
  const Vector& c = lp.c;

  const double h_scale = 1.0 + h.lpNorm<Eigen::Infinity>();
  const double b_scale = 1.0 + (q > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0);
  const double c_scale = 1.0 + c.lpNorm<Eigen::Infinity>();

  // Start on the positive orthant: equality-feasible x when possible, slacks
  // matched to h - Gx where that is comfortably positive.
  Vector x = Vector::Zero(k);
  if (q > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(e);
    x = qr.solve(b);
    if (!x.allFinite()) {
      x.setZero();
    }
  }
  Vector s = (h - g * x).cwiseMax(1.0);
  Vector z = Vector::Ones(r);
  Vector y = Vector::Zero(q);

  KktSolver kkt(lp);
  std::optional<Candidate> candidate;
  const double polish_gap = std::max(tol.gap * 1e-4, 1e-13);
  int polish_iters = 0;
  double mu_prev = std::numeric_limits<double>::infinity();
  int mu_stall = 0;
  LpStatus status = LpStatus::IterLimit;
  int iter = 0;

  const auto detect_rays = [&](double strictness) -> std::optional<LpStatus> {
    const double dual_mag = z.lpNorm<1>() + y.lpNorm<1>();
    if (dual_mag > 1e6) {
      Vector zr = z / dual_mag;
      Vector yr = y / dual_mag;
      Vector stat = g.transpose() * zr;
      if (q > 0) {
        stat += e.transpose() * yr;
      }
      const double gain = h.dot(zr) + (q > 0 ? b.dot(yr) : 0.0);
      if (stat.lpNorm<Eigen::Infinity>() < strictness && gain < -strictness) {
        return LpStatus::Infeasible;
      }
    }
    const double x_mag = x.lpNorm<Eigen::Infinity>();
    if (x_mag > 1e6) {
      Vector xr = x / x_mag;
      const bool descent = c.dot(xr) < -strictness;
      const bool recession = (g * xr).maxCoeff() < strictness &&
                             (q == 0 || (e * xr).lpNorm<Eigen::Infinity>() <
                                            strictness);
      if (descent && recession) {
        return LpStatus::Unbounded;
      }
    }
    return std::nullopt;
  };

  for (iter = 1; iter <= tol.max_iterations; ++iter) {
    Vector r_p = g * x + s - h;
    Vector r_e = q > 0 ? Vector(e * x - b) : Vector();
    Vector r_d = c + g.transpose() * z;
    if (q > 0) {
      r_d += e.transpose() * y;
    }
    const double mu = s.dot(z) / static_cast<double>(r);

    double pinf = r_p.lpNorm<Eigen::Infinity>() / h_scale;
    if (q > 0) {
      pinf = std::max(pinf, r_e.lpNorm<Eigen::Infinity>() / b_scale);
    }
    const double dinf = r_d.lpNorm<Eigen::Infinity>() / c_scale;
    const double primal_obj = c.dot(x);
    const double dual_obj = -h.dot(z) - (q > 0 ? b.dot(y) : 0.0);
    const double gap_rel =
        std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));

    if (!std::isfinite(pinf) || !std::isfinite(dinf) ||
        !std::isfinite(gap_rel)) {
      break;
    }

    if (pinf <= tol.feasibility && dinf <= tol.feasibility &&
        gap_rel <= tol.gap) {
      if (!candidate || gap_rel < candidate->gap) {
        candidate = Candidate{x, y, z, primal_obj, gap_rel, iter};
      }
      if (gap_rel <= polish_gap || ++polish_iters > 25) {
        break;
      }
    }

    if (!candidate) {
      if (auto ray = detect_rays(1e-7)) {
        status = *ray;
        break;
      }
    }

    if (mu >= mu_prev) {
      if (++mu_stall >= 3 && candidate) {
        break;
      }
    } else {
      mu_stall = 0;
    }
    mu_prev = mu;

    const Vector d = z.cwiseQuotient(s);
    if (!kkt.prepare(d)) {
      break;
    }

    const auto newton = [&](const Vector& w_comp, Vector& dx, Vector& ds,
                            Vector& dz, Vector& dy) {
      const Vector tmp = d.cwiseProduct(r_p) - w_comp.cwiseQuotient(s);
      const Vector rhs1 = -r_d - g.transpose() * tmp;
      if (q == 0) {
        dx = kkt.solve_h(rhs1);
      } else {
        const Vector u = kkt.solve_h(rhs1);
        dy = kkt.solve_schur(e * u + r_e);
        dx = kkt.solve_h(rhs1 - e.transpose() * dy);
      }
      ds = -r_p - g * dx;
      dz = -d.cwiseProduct(ds) - w_comp.cwiseQuotient(s);
    };

    // Predictor.
    Vector dx, ds, dz, dy;
    newton(s.cwiseProduct(z), dx, ds, dz, dy);
    const double ap_aff = std::min(1.0, max_step(s, ds));
    const double ad_aff = std::min(1.0, max_step(z, dz));
    const double mu_aff = (s + ap_aff * ds).dot(z + ad_aff * dz) /
                          static_cast<double>(r);
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3);
    sigma = std::clamp(sigma, 1e-8, 0.99);

    // Corrector reuses the factorization.
    Vector w_comp =
        s.cwiseProduct(z) + ds.cwiseProduct(dz) -
        Vector::Constant(r, sigma * mu);
    newton(w_comp, dx, ds, dz, dy);

    const double eta = mu < 1e-6 ? 0.9995 : 0.995;
    const double ap = std::min(1.0, eta * max_step(s, ds));
    const double ad = std::min(1.0, eta * max_step(z, dz));
    if (ap < 1e-10 && ad < 1e-10) {
      break;
    }

    x += ap * dx;
    s += ap * ds;
    z += ad * dz;
    if (q > 0) {
      y += ad * dy;
    }
  }

  LpSolution sol;
  if (candidate) {
    sol.status = LpStatus::Optimal;
    sol.x = std::move(candidate->x);
    sol.eq_duals = std::move(candidate->y);
    sol.ineq_duals = std::move(candidate->z);
    sol.objective_value = candidate->objective;
    sol.duality_gap = candidate->gap;
    sol.iterations = candidate->iterations;
    return sol;
  }
  if (status == LpStatus::IterLimit) {
    if (auto ray = detect_rays(1e-6)) {
      status = *ray;
    }
  }
  sol.status = status;
  sol.x = std::move(x);
  sol.eq_duals = std::move(y);
  sol.ineq_duals = std::move(z);
  sol.objective_value = c.dot(sol.x);
  sol.duality_gap = std::numeric_limits<double>::quiet_NaN();
  sol.iterations = iter;
  return sol;
}

}  // namespace l1codec
