#pragma once

#include <string>

#include "l1codec/linalg.hpp"

namespace l1codec {

// Hint describing the inequality block so the KKT solve can pick a cheaper
// elimination. The hint never changes the optimization problem; General is
// always valid.
enum class ConstraintPattern {
  General,
  // G = [-A -I; A -I] over variables (g, t): the |residual| <= t recast of
  // an l1 objective. Reduces each KKT solve to an n x n system.
  SignedResidual,
  // G = -I, h = 0: nonnegative variables only. KKT matrix is diagonal.
  NonnegOrthant,
};

// min c^T x  subject to  G x <= h,  E x = b.
struct LinearProgram {
  Vector c;
  Matrix ineq_matrix;  // G, may be 0 x n
  Vector ineq_rhs;     // h
  Matrix eq_matrix;    // E, may be 0 x n
  Vector eq_rhs;       // b
  ConstraintPattern pattern = ConstraintPattern::General;

  Index num_vars() const { return c.size(); }
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

const char* to_string(LpStatus status);

struct ToleranceSettings {
  double feasibility = 1e-8;
  double gap = 1e-8;
  int max_iterations = 200;
};

struct LpSolution {
  Vector x;
  double objective_value = 0.0;
  // Relative duality gap |c^T x + h^T z + b^T y| / (1 + |c^T x|) at exit.
  double duality_gap = 0.0;
  LpStatus status = LpStatus::IterLimit;
  Vector ineq_duals;  // z >= 0
  Vector eq_duals;    // y
  int iterations = 0;
};

// Primal-dual interior-point method (Mehrotra predictor-corrector) for
// dense LPs. Optimal status is only reported when primal/dual feasibility
// and the relative duality gap are within the tolerances; the solver keeps
// polishing a bit past them so downstream recovery checks see extra margin.
LpSolution solve_lp(const LinearProgram& lp,
                    const ToleranceSettings& tol = {});

}  // namespace l1codec
