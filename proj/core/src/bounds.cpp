#include "l1codec/bounds.hpp"

#include <cmath>
#include <string>

namespace l1codec {

double entropy(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("entropy: q must lie in (0, 1)");
  }
  return -q * std::log(q) - (1.0 - q) * std::log1p(-q);
}

double f_of_r(double r, double m_over_p) {
  if (!(r > 0.0 && r < 1.0)) {
    throw DomainError("f_of_r: r must lie in (0, 1)");
  }
  if (!(m_over_p >= 1.0)) {
    throw DomainError("f_of_r: m/p must be >= 1");
  }
  return std::sqrt(m_over_p) * (std::sqrt(r) + std::sqrt(2.0 * entropy(r)));
}

double rho(double r, double p_over_m) {
  if (!(r > 0.0 && 3.0 * r < 1.0)) {
    throw DomainError("rho: need 0 < 3r < 1");
  }
  if (!(p_over_m > 0.0 && p_over_m <= 1.0)) {
    throw DomainError("rho: p/m must lie in (0, 1]");
  }
  const double m_over_p = 1.0 / p_over_m;
  double sum = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const double fj = f_of_r(j * r, m_over_p);
    sum += -1.0 + (1.0 + fj) * (1.0 + fj);
  }
  return sum;
}

double rho_finite(double r, double p_over_m, double eps) {
  if (!(r > 0.0 && 3.0 * r < 1.0)) {
    throw DomainError("rho_finite: need 0 < 3r < 1");
  }
  if (!(p_over_m > 0.0 && p_over_m <= 1.0)) {
    throw DomainError("rho_finite: p/m must lie in (0, 1]");
  }
  if (!(eps >= 0.0)) {
    throw DomainError("rho_finite: eps must be >= 0");
  }
  const double m_over_p = 1.0 / p_over_m;
  double sum = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const double rj = j * r;
    const double term = 1.0 + std::sqrt(rj * m_over_p) +
                        (1.0 + eps) * std::sqrt(m_over_p) *
                            std::sqrt(2.0 * entropy(rj));
    sum += -1.0 + term * term;
  }
  return sum;
}

namespace {

template <typename Fn>
double bisect_to_one(Fn&& fn, double tol, const char* what) {
  double lo = 1e-12;
  double hi = 1.0 / 3.0 - 1e-12;
  if (!(fn(lo) < 1.0 && fn(hi) > 1.0)) {
    throw BracketError(std::string(what) +
                       ": no sign change over (0, 1/3)");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (fn(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double r_star(double p_over_m, double tol) {
  if (!(p_over_m > 0.0 && p_over_m <= 1.0)) {
    throw DomainError("r_star: p/m must lie in (0, 1]");
  }
  return bisect_to_one([&](double r) { return rho(r, p_over_m); }, tol,
                       "r_star");
}

double r_star_finite(double p_over_m, double eps, double tol) {
  if (!(p_over_m > 0.0 && p_over_m <= 1.0)) {
    throw DomainError("r_star_finite: p/m must lie in (0, 1]");
  }
  return bisect_to_one(
      [&](double r) { return rho_finite(r, p_over_m, eps); }, tol,
      "r_star_finite");
}

double eta_p(std::int64_t p, double gamma) {
  if (p < 1) {
    throw DomainError("eta_p: p must be >= 1");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("eta_p: gamma must lie in (0, 1]");
  }
  return 0.5 * std::pow(static_cast<double>(p), -1.0 / 3.0) *
         std::pow(gamma, 1.0 / 6.0) *
         std::pow(1.0 + std::sqrt(gamma), 2.0 / 3.0);
}

SingularDeviation singular_deviation_tail(std::int64_t p, std::int64_t t_size,
                                          double t) {
  if (p < 1 || t_size < 1 || t_size > p) {
    throw DomainError("singular_deviation_tail: need 1 <= |T| <= p");
  }
  if (!(t > 0.0)) {
    throw DomainError("singular_deviation_tail: t must be positive");
  }
  const double prob = std::exp(-0.5 * static_cast<double>(p) * t * t);
  const double gamma = static_cast<double>(t_size) / static_cast<double>(p);
  const double spread = std::sqrt(gamma) + eta_p(p, gamma) + t;
  return {prob, prob, 1.0 + spread, 1.0 - spread};
}

DeltaTail delta_tail_bound(std::int64_t m, std::int64_t p, std::int64_t s,
                           double eps) {
  if (m < 1 || s < 1 || s >= m) {
    throw DomainError("delta_tail_bound: need 0 < S < m");
  }
  if (p < 1) {
    throw DomainError("delta_tail_bound: p must be >= 1");
  }
  if (!(eps > 0.0)) {
    throw DomainError("delta_tail_bound: eps must be positive");
  }
  const double r = static_cast<double>(s) / static_cast<double>(m);
  const double h = entropy(r);
  const double prob =
      2.0 * std::exp(-0.5 * static_cast<double>(m) * h * eps);
  const double fr =
      f_of_r(r, static_cast<double>(m) / static_cast<double>(p));
  const double base = 1.0 + (1.0 + eps) * fr;
  return {prob, base * base - 1.0};
}

double j_limit(double r) {
  if (!(r > 0.0 && 2.0 * r < 1.0)) {
    throw DomainError("j_limit: need 0 < r < 1/2");
  }
  return 2.0 * std::sqrt(r) + r +
         (2.0 + std::sqrt(2.0)) * std::sqrt(r * (1.0 - r)) +
         std::sqrt(r * (1.0 - 2.0 * r));
}

double j_limit_root(double tol) {
  double lo = 1e-12;
  double hi = 0.5 - 1e-12;
  if (!(j_limit(lo) < 1.0 && j_limit(hi) > 1.0)) {
    throw BracketError("j_limit_root: no sign change over (0, 1/2)");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (j_limit(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void BoundQuery::validate() const {
  if (p > 0 && m > 0 && p > m) {
    throw DomainError("BoundQuery: need p <= m");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("BoundQuery: ratio p/m must lie in (0, 1]");
  }
  if (r != 0.0 && !(r > 0.0 && 3.0 * r < 1.0)) {
    throw DomainError("BoundQuery: r must satisfy 0 < 3r < 1");
  }
  if (epsilon < 0.0) {
    throw DomainError("BoundQuery: epsilon must be >= 0");
  }
}

}  // namespace l1codec
