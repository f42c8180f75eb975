#pragma once

#include "l1codec/linprog.hpp"
#include "l1codec/rng.hpp"

namespace l1codec {

// min_g ||y - A g||_1, solved through the (g, t) linear program with
// -t <= y - A g <= t.
struct DecodeResult {
  Vector f_hat;       // recovered plaintext
  Vector e_hat;       // implied error vector y - A f_hat
  double objective;   // l1 norm of e_hat
  LpStatus status;
  // Sign subgradient u built from the inequality duals: at optimality
  // ||u||_inf <= 1, u_i = sgn(e_hat_i) on nonzero residuals, A^T u = 0.
  Vector residual_duals;
};

DecodeResult decode_l1(const Matrix& a, const Vector& y,
                       const ToleranceSettings& tol = {});

struct BasisPursuitResult {
  Vector d;
  LpStatus status;
  // Equality-constraint duals; -F^T dual is the sign subgradient of ||d||_1.
  Vector duals;
};

// min ||d||_1 subject to F d = y_tilde, via the (d+, d-) >= 0 split.
BasisPursuitResult basis_pursuit(const Matrix& f, const Vector& y_tilde,
                                 const ToleranceSettings& tol = {});

// Runs both routes on y = A f + e: residual decoding, and basis pursuit on
// the annihilated observations. Returns true when the routes agree: equal
// objectives always, and elementwise-equal minimizers whenever both optima
// look like unique vertices (dual strict complementarity + full-rank
// support, confirmed by a re-solve under a random column permutation).
bool decode_equivalence_check(const Matrix& a, const Vector& f,
                              const Vector& e, SeededRng& rng);

}  // namespace l1codec
