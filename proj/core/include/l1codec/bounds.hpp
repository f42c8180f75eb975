#pragma once

#include "l1codec/errors.hpp"

namespace l1codec {

// Closed-form bounds for p x m Gaussian matrices with entry variance 1/p,
// in terms of the corruption ratio r = S/m and the aspect ratio p/m.
// Natural logarithms throughout.

// H(q) = -q ln q - (1 - q) ln(1 - q) for 0 < q < 1.
double entropy(double q);

// f(r) = sqrt(m/p) (sqrt(r) + sqrt(2 H(r))); increasing in r on (0, 1/2).
double f_of_r(double r, double m_over_p);

// rho(r) = sum_{j=1..3} (-1 + (1 + f(j r))^2): asymptotic upper bound on
// delta_S + delta_{2S} + delta_{3S}. Needs 3r < 1.
double rho(double r, double p_over_m);

// Finite-sample variant with the concentration slack folded in:
// each term uses [1 + sqrt(j r m/p) + (1 + eps) sqrt(m/p) sqrt(2 H(j r))]^2.
double rho_finite(double r, double p_over_m, double eps);

// Root of rho(r) = 1 on (0, 1/3), by bisection to within tol.
double r_star(double p_over_m, double tol = 1e-8);

// Root of rho_finite(r, ., eps) = 1.
double r_star_finite(double p_over_m, double eps, double tol = 1e-8);

// Explicit o(1) term of the singular-value concentration inequality:
// (1 / (2 p^{1/3})) gamma^{1/6} (1 + sqrt(gamma))^{2/3}.
double eta_p(std::int64_t p, double gamma);

// Two-sided singular-value deviation bound exp(-p t^2 / 2) together with
// the thresholds 1 +- (sqrt(|T|/p) + eta_p + t) it certifies.
struct SingularDeviation {
  double upper_prob;
  double lower_prob;
  double upper_threshold;
  double lower_threshold;
};

SingularDeviation singular_deviation_tail(std::int64_t p, std::int64_t t_size,
                                          double t);

// Large-deviation bound 2 exp(-m H(r) eps / 2) on the event
// 1 + delta_S > [1 + (1 + eps) f(r)]^2, with the threshold value.
struct DeltaTail {
  double probability;
  double threshold;  // [1 + (1 + eps) f(r)]^2 - 1
};

DeltaTail delta_tail_bound(std::int64_t m, std::int64_t p, std::int64_t s,
                           double eps);

// J(r) = 2 sqrt(r) + r + (2 + sqrt(2)) sqrt(r (1 - r)) + sqrt(r (1 - 2r)),
// the lower limit of the recovery-condition sum along S/m -> r.
double j_limit(double r);

// Root of J(r) = 1 on (0, 1/2); the ratio past which the condition sum
// cannot stay below one.
double j_limit_root(double tol = 1e-10);

// Validated query for the CLI surface.
struct BoundQuery {
  std::int64_t p = 0;      // 0 means ratio-only mode
  std::int64_t m = 0;
  double gamma = 0.0;      // p/m
  double r = 0.0;          // 0 means unset
  double epsilon = 0.0;
  void validate() const;
};

}  // namespace l1codec
