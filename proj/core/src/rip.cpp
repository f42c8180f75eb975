#include "l1codec/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace l1codec {

const char* to_string(RipMode mode) {
  return mode == RipMode::Exact ? "exact" : "sampled-lower-bound";
}

std::uint64_t binomial_capped(Index n, Index k) {
  if (k < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  const std::uint64_t cap = std::uint64_t{1} << 63;
  std::uint64_t result = 1;
  for (Index i = 1; i <= k; ++i) {
    const double estimate =
        static_cast<double>(result) * static_cast<double>(n - k + i) /
        static_cast<double>(i);
    if (estimate >= static_cast<double>(cap)) {
      return cap;
    }
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

namespace {

// Visits all k-subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(Index n, Index k, Fn&& fn) {
  if (k == 0 || k > n) {
    return;
  }
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (;;) {
    fn(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) {
      --i;
    }
    if (i < 0) {
      return;
    }
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] =
          idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// max(lambda_max - 1, 1 - lambda_min) for the Gram submatrix on `idx`.
class GramDeviation {
 public:
  explicit GramDeviation(const Matrix& gram) : gram_(gram) {}

  double operator()(const std::vector<Index>& idx) {
    const Index s = static_cast<Index>(idx.size());
    if (s == 1) {
      return std::abs(gram_(idx[0], idx[0]) - 1.0);
    }
    if (s == 2) {
      const double a = gram_(idx[0], idx[0]);
      const double c = gram_(idx[1], idx[1]);
      const double bb = gram_(idx[0], idx[1]);
      const double mid = 0.5 * (a + c);
      const double rad = std::sqrt(0.25 * (a - c) * (a - c) + bb * bb);
      return std::max((mid + rad) - 1.0, 1.0 - (mid - rad));
    }
    sub_.resize(s, s);
    for (Index i = 0; i < s; ++i) {
      for (Index j = 0; j <= i; ++j) {
        sub_(i, j) = gram_(idx[static_cast<std::size_t>(i)],
                           idx[static_cast<std::size_t>(j)]);
        sub_(j, i) = sub_(i, j);
      }
    }
    if (s == 3) {
      eig_.computeDirect(sub_, Eigen::EigenvaluesOnly);
    } else {
      eig_.compute(sub_, Eigen::EigenvaluesOnly);
    }
    const auto& ev = eig_.eigenvalues();
    return std::max(ev(s - 1) - 1.0, 1.0 - ev(0));
  }

 private:
  const Matrix& gram_;
  Matrix sub_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig_;
};

// Largest singular value of the cross-Gram block gram(rows, cols).
class CrossGramSigma {
 public:
  explicit CrossGramSigma(const Matrix& gram) : gram_(gram) {}

  double operator()(const std::vector<Index>& rows,
                    const std::vector<Index>& cols) {
    const Index s = static_cast<Index>(rows.size());
    const Index sp = static_cast<Index>(cols.size());
    if (s == 1 || sp == 1) {
      double sq = 0.0;
      for (Index i = 0; i < s; ++i) {
        for (Index j = 0; j < sp; ++j) {
          const double v = gram_(rows[static_cast<std::size_t>(i)],
                                 cols[static_cast<std::size_t>(j)]);
          sq += v * v;
        }
      }
      return std::sqrt(sq);
    }
    block_.resize(s, sp);
    for (Index i = 0; i < s; ++i) {
      for (Index j = 0; j < sp; ++j) {
        block_(i, j) = gram_(rows[static_cast<std::size_t>(i)],
                             cols[static_cast<std::size_t>(j)]);
      }
    }
    if (std::min(s, sp) == 2) {
      // Largest eigenvalue of the 2x2 normal matrix, closed form.
      Eigen::Matrix2d nn;
      if (s == 2) {
        nn = block_ * block_.transpose();
      } else {
        nn = block_.transpose() * block_;
      }
      const double mid = 0.5 * (nn(0, 0) + nn(1, 1));
      const double rad = std::sqrt(0.25 * (nn(0, 0) - nn(1, 1)) *
                                       (nn(0, 0) - nn(1, 1)) +
                                   nn(0, 1) * nn(0, 1));
      return std::sqrt(std::max(mid + rad, 0.0));
    }
    svd_.compute(block_);
    return svd_.singularValues()(0);
  }

 private:
  const Matrix& gram_;
  Matrix block_;
  Eigen::JacobiSVD<Matrix> svd_;
};

std::vector<Index> sample_subset(Index universe, Index size, SeededRng& rng,
                                 std::vector<Index>& scratch) {
  scratch.resize(static_cast<std::size_t>(universe));
  std::iota(scratch.begin(), scratch.end(), Index{0});
  for (Index i = 0; i < size; ++i) {
    const auto j = i + static_cast<Index>(rng.below(
                           static_cast<std::uint64_t>(universe - i)));
    std::swap(scratch[static_cast<std::size_t>(i)],
              scratch[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> out(scratch.begin(), scratch.begin() + size);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double delta_one(const Matrix& f) {
  if (f.cols() < 1) {
    throw DimensionError("delta_one: empty matrix");
  }
  double dev = 0.0;
  for (Index j = 0; j < f.cols(); ++j) {
    dev = std::max(dev, std::abs(f.col(j).squaredNorm() - 1.0));
  }
  return dev;
}

double delta_exact(const Matrix& f, Index s, std::uint64_t cap) {
  const Index m = f.cols();
  if (s < 1 || s > m) {
    throw DimensionError("delta_exact: S out of range");
  }
  if (s == 1) {
    return delta_one(f);
  }
  const std::uint64_t count = binomial_capped(m, s);
  if (count > cap) {
    throw EnumerationCapError(
        "delta_exact: C(" + std::to_string(m) + "," + std::to_string(s) +
        ") = " + std::to_string(count) + " subsets exceed cap " +
        std::to_string(cap) + "; use delta_sampled");
  }
  const Matrix gram = f.transpose() * f;
  GramDeviation dev(gram);
  double best = 0.0;
  for_each_combination(m, s, [&](const std::vector<Index>& idx) {
    best = std::max(best, dev(idx));
  });
  return best;
}

double delta_sampled(const Matrix& f, Index s, std::uint64_t samples,
                     SeededRng& rng) {
  const Index m = f.cols();
  if (s < 1 || s > m) {
    throw DimensionError("delta_sampled: S out of range");
  }
  const Matrix gram = f.transpose() * f;
  GramDeviation dev(gram);
  std::vector<Index> scratch;
  double best = 0.0;
  for (std::uint64_t it = 0; it < samples; ++it) {
    best = std::max(best, dev(sample_subset(m, s, rng, scratch)));
  }
  return best;
}

double theta_exact(const Matrix& f, Index s, Index s_prime,
                   std::uint64_t cap) {
  const Index m = f.cols();
  if (s < 1 || s_prime < 1 || s + s_prime > m) {
    throw DimensionError("theta_exact: need S, S' >= 1 and S + S' <= cols");
  }
  const std::uint64_t outer = binomial_capped(m, s);
  const std::uint64_t inner = binomial_capped(m - s, s_prime);
  if (outer == 0 || inner == 0 ||
      outer > cap / std::max<std::uint64_t>(inner, 1)) {
    throw EnumerationCapError(
        "theta_exact: subset pair count exceeds cap " + std::to_string(cap) +
        "; use theta_sampled");
  }
  const Matrix gram = f.transpose() * f;
  CrossGramSigma sigma(gram);
  double best = 0.0;
  std::vector<Index> complement;
  std::vector<Index> t_prime;
  for_each_combination(m, s, [&](const std::vector<Index>& t_set) {
    complement.clear();
    std::size_t pos = 0;
    for (Index j = 0; j < m; ++j) {
      if (pos < t_set.size() && t_set[pos] == j) {
        ++pos;
        continue;
      }
      complement.push_back(j);
    }
    for_each_combination(static_cast<Index>(complement.size()), s_prime,
                         [&](const std::vector<Index>& rel) {
                           t_prime.clear();
                           for (Index r : rel) {
                             t_prime.push_back(
                                 complement[static_cast<std::size_t>(r)]);
                           }
                           best = std::max(best, sigma(t_set, t_prime));
                         });
  });
  return best;
}

double theta_sampled(const Matrix& f, Index s, Index s_prime,
                     std::uint64_t samples, SeededRng& rng) {
  const Index m = f.cols();
  if (s < 1 || s_prime < 1 || s + s_prime > m) {
    throw DimensionError("theta_sampled: need S, S' >= 1 and S + S' <= cols");
  }
  const Matrix gram = f.transpose() * f;
  CrossGramSigma sigma(gram);
  std::vector<Index> scratch;
  double best = 0.0;
  for (std::uint64_t it = 0; it < samples; ++it) {
    std::vector<Index> both = sample_subset(m, s + s_prime, rng, scratch);
    // Random disjoint split of the drawn indices.
    for (Index i = 0; i < s; ++i) {
      const auto j = i + static_cast<Index>(rng.below(
                             static_cast<std::uint64_t>(s + s_prime - i)));
      std::swap(both[static_cast<std::size_t>(i)],
                both[static_cast<std::size_t>(j)]);
    }
    std::vector<Index> t_set(both.begin(), both.begin() + s);
    std::vector<Index> t_prime(both.begin() + s, both.end());
    std::sort(t_set.begin(), t_set.end());
    std::sort(t_prime.begin(), t_prime.end());
    best = std::max(best, sigma(t_set, t_prime));
  }
  return best;
}

SandwichVerdict check_theta_delta(const Matrix& f, Index s, Index s_prime) {
  SandwichVerdict v{};
  v.theta = theta_exact(f, s, s_prime);
  v.delta_sum = delta_exact(f, s + s_prime);
  v.delta_s = delta_exact(f, s);
  v.delta_s_prime = delta_exact(f, s_prime);
  constexpr double kSlack = 1e-9;
  v.lhs_ok = v.theta <= v.delta_sum + kSlack;
  v.rhs_ok = v.delta_sum <= v.theta + std::max(v.delta_s, v.delta_s_prime) +
                                kSlack;
  return v;
}

RecoveryCondition recovery_condition(const Matrix& f, Index s,
                                     std::uint64_t cap) {
  if (3 * s > f.cols()) {
    throw DimensionError("recovery_condition: need 3S <= cols");
  }
  const double value = delta_exact(f, s, cap) + theta_exact(f, s, s, cap) +
                       theta_exact(f, s, 2 * s, cap);
  return {value, value < 1.0};
}

L0Result l0_decode_bruteforce(const Matrix& f, const Vector& y_tilde,
                              Index s_max, std::uint64_t cap) {
  const Index p = f.rows();
  const Index m = f.cols();
  if (y_tilde.size() != p) {
    throw DimensionError("l0_decode_bruteforce: rhs length mismatch");
  }
  if (s_max < 0 || s_max > m) {
    throw DimensionError("l0_decode_bruteforce: S_max out of range");
  }
  std::uint64_t total = 0;
  for (Index s = 1; s <= s_max; ++s) {
    const std::uint64_t c = binomial_capped(m, s);
    total = (total > cap || c > cap - total) ? cap + 1 : total + c;
  }
  if (total > cap) {
    throw EnumerationCapError(
        "l0_decode_bruteforce: subset solve count exceeds cap " +
        std::to_string(cap));
  }

  constexpr double kResidualTol = 1e-8;
  if (y_tilde.norm() <= kResidualTol) {
    return {Vector::Zero(m), true};
  }

  const Matrix gram = f.transpose() * f;
  const Vector proj = f.transpose() * y_tilde;
  Eigen::LDLT<Matrix> ldlt;
  Matrix sub;
  Vector rhs, coeffs, residual;

  for (Index s = 1; s <= s_max; ++s) {
    int hits = 0;
    Vector best;
    for_each_combination(m, s, [&](const std::vector<Index>& idx) {
      sub.resize(s, s);
      rhs.resize(s);
      for (Index i = 0; i < s; ++i) {
        rhs(i) = proj(idx[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < s; ++j) {
          sub(i, j) = gram(idx[static_cast<std::size_t>(i)],
                           idx[static_cast<std::size_t>(j)]);
        }
      }
      ldlt.compute(sub);
      coeffs = ldlt.solve(rhs);
      coeffs += ldlt.solve(rhs - sub * coeffs);
      if (!coeffs.allFinite()) {
        return;
      }
      residual = y_tilde;
      for (Index i = 0; i < s; ++i) {
        residual -= coeffs(i) * f.col(idx[static_cast<std::size_t>(i)]);
      }
      if (residual.norm() <= kResidualTol) {
        if (hits++ == 0) {
          best = Vector::Zero(m);
          for (Index i = 0; i < s; ++i) {
            best(idx[static_cast<std::size_t>(i)]) = coeffs(i);
          }
        }
      }
    });
    if (hits > 0) {
      return {best, hits == 1};
    }
  }
  throw NoSolutionError(
      "l0_decode_bruteforce: no support of size <= " + std::to_string(s_max) +
      " fits the data");
}

namespace {

// w = F_U (F_U^T F_U)^{-1} targets; matches <w, v_j> = targets on U.
Vector interpolate_on_support(const Matrix& f,
                              const std::vector<Index>& support,
                              const Vector& targets) {
  Matrix cols(f.rows(), static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    cols.col(static_cast<Index>(i)) = f.col(support[i]);
  }
  const Vector coeffs = solve_gram_system(cols, targets);
  return cols * coeffs;
}

}  // namespace

DualL2Result dual_certificate_l2(const Matrix& f, const IndexSet& t,
                                 const Vector& c_t) {
  if (t.universe() != f.cols()) {
    throw DimensionError("dual_certificate_l2: index universe mismatch");
  }
  if (c_t.size() != t.size()) {
    throw DimensionError("dual_certificate_l2: target length mismatch");
  }
  DualL2Result result;
  result.w = interpolate_on_support(f, t.indices(), c_t);
  result.exceptional_budget = std::numeric_limits<double>::quiet_NaN();
  const Index s = t.size();
  if (2 * s <= f.cols()) {
    try {
      const double delta = delta_exact(f, s);
      const double theta = theta_exact(f, s, s);
      if (delta < 1.0) {
        result.exceptional_budget = theta * c_t.norm() / (1.0 - delta);
      }
    } catch (const EnumerationCapError&) {
      // budget stays NaN; the interpolant itself is unaffected
    }
  }
  return result;
}

DualCertificate dual_certificate_linf(const Matrix& f, const IndexSet& t,
                                      const Vector& signs, int max_iter,
                                      double tol) {
  if (t.universe() != f.cols()) {
    throw DimensionError("dual_certificate_linf: index universe mismatch");
  }
  if (signs.size() != t.size()) {
    throw DimensionError("dual_certificate_linf: sign length mismatch");
  }
  if (t.size() == 0) {
    throw DimensionError("dual_certificate_linf: empty support");
  }
  if (max_iter < 1) {
    throw DimensionError("dual_certificate_linf: max_iter must be >= 1");
  }

  const Index m = f.cols();
  const Index s = t.size();
  const std::vector<Index>& t0 = t.indices();

  // Exact constants drive the exceptional-set threshold when affordable;
  // otherwise everything above tol is exceptional (optimistic mode).
  double delta_s = std::numeric_limits<double>::quiet_NaN();
  double theta_s2s = std::numeric_limits<double>::quiet_NaN();
  bool have_constants = false;
  if (3 * s <= m) {
    try {
      delta_s = delta_exact(f, s);
      theta_s2s = theta_exact(f, s, 2 * s);
      have_constants = delta_s < 1.0;
    } catch (const EnumerationCapError&) {
    }
  }

  DualCertificate cert;
  cert.support = t0;
  cert.w = Vector::Zero(f.rows());
  cert.iterations = 0;
  cert.converged = false;

  std::vector<Index> prev_set;
  Vector prev_values;
  double term_sign = 1.0;
  bool reached_tol = false;

  // Threshold mirrors the exceptional-set budget for S' = 2S, but each kept
  // set is capped at S entries so the interpolation supports stay at 2S
  // columns and the mass decay keeps the theta_{S,2S}/(1 - delta_{2S}) rate.
  const Index max_exceptional = s;
  std::vector<char> in_matched(static_cast<std::size_t>(m), 0);

  for (int n = 1; n <= max_iter; ++n) {
    std::vector<Index> matched;
    Vector targets;
    if (n == 1) {
      matched = t0;
      targets = signs;
    } else {
      matched.reserve(t0.size() + prev_set.size());
      targets.resize(static_cast<Index>(t0.size() + prev_set.size()));
      std::size_t a = 0, b = 0;
      Index k = 0;
      while (a < t0.size() || b < prev_set.size()) {
        if (b >= prev_set.size() ||
            (a < t0.size() && t0[a] < prev_set[b])) {
          matched.push_back(t0[a]);
          targets(k++) = 0.0;
          ++a;
        } else {
          matched.push_back(prev_set[b]);
          targets(k++) = prev_values(static_cast<Index>(b));
          ++b;
        }
      }
    }

    Vector w_n;
    try {
      w_n = interpolate_on_support(f, matched, targets);
    } catch (const SingularityError&) {
      break;  // degenerate support union; certificate cannot be refined
    }
    cert.w += term_sign * w_n;
    term_sign = -term_sign;
    cert.iterations = n;

    const Vector inner = f.transpose() * w_n;
    std::fill(in_matched.begin(), in_matched.end(), 0);
    for (Index j : matched) {
      in_matched[static_cast<std::size_t>(j)] = 1;
    }

    double threshold = tol;
    if (have_constants) {
      threshold = std::max(
          tol, theta_s2s * targets.norm() /
                   ((1.0 - delta_s) * std::sqrt(static_cast<double>(2 * s))));
    }

    std::vector<Index> exceptional;
    for (Index j = 0; j < m; ++j) {
      if (!in_matched[static_cast<std::size_t>(j)] &&
          std::abs(inner(j)) > threshold) {
        exceptional.push_back(j);
      }
    }
    if (static_cast<Index>(exceptional.size()) > max_exceptional) {
      std::sort(exceptional.begin(), exceptional.end(),
                [&](Index u, Index v) {
                  return std::abs(inner(u)) > std::abs(inner(v));
                });
      exceptional.resize(static_cast<std::size_t>(max_exceptional));
      std::sort(exceptional.begin(), exceptional.end());
    }

    double mass_sq = 0.0;
    for (Index j : exceptional) {
      mass_sq += inner(j) * inner(j);
    }
    const double mass = std::sqrt(mass_sq);
    cert.exceptional_masses.push_back(mass);

    if (mass <= tol) {
      reached_tol = true;
      break;
    }

    prev_set = std::move(exceptional);
    prev_values.resize(static_cast<Index>(prev_set.size()));
    for (std::size_t i = 0; i < prev_set.size(); ++i) {
      prev_values(static_cast<Index>(i)) = inner(prev_set[i]);
    }
  }

  const Vector inner_total = f.transpose() * cert.w;
  cert.on_support_values.resize(s);
  double on_dev = 0.0;
  for (Index i = 0; i < s; ++i) {
    cert.on_support_values(i) = inner_total(t0[static_cast<std::size_t>(i)]);
    on_dev = std::max(on_dev,
                      std::abs(cert.on_support_values(i) - signs(i)));
  }
  double off_max = 0.0;
  std::fill(in_matched.begin(), in_matched.end(), 0);
  for (Index j : t0) {
    in_matched[static_cast<std::size_t>(j)] = 1;
  }
  for (Index j = 0; j < m; ++j) {
    if (!in_matched[static_cast<std::size_t>(j)]) {
      off_max = std::max(off_max, std::abs(inner_total(j)));
    }
  }
  cert.off_support_max = off_max;
  cert.converged = reached_tol && on_dev <= 1e-8 && off_max < 1.0;
  return cert;
}

bool verify_certificate(const Matrix& f, const IndexSet& t,
                        const Vector& signs, const Vector& w) {
  if (t.universe() != f.cols() || signs.size() != t.size() ||
      w.size() != f.rows()) {
    throw DimensionError("verify_certificate: dimension mismatch");
  }
  const Vector inner = f.transpose() * w;
  std::vector<char> on(static_cast<std::size_t>(f.cols()), 0);
  for (Index i = 0; i < t.size(); ++i) {
    const Index j = t.indices()[static_cast<std::size_t>(i)];
    on[static_cast<std::size_t>(j)] = 1;
    if (std::abs(inner(j) - signs(i)) > 1e-6) {
      return false;
    }
  }
  for (Index j = 0; j < f.cols(); ++j) {
    if (!on[static_cast<std::size_t>(j)] &&
        std::abs(inner(j)) > 1.0 - 1e-9) {
      return false;
    }
  }
  return true;
}

RipReport compute_rip_report(const Matrix& f, Index s, RipMode mode,
                             std::uint64_t cap, std::uint64_t samples,
                             std::uint64_t seed,
                             std::vector<std::pair<Index, Index>>
                                 extra_theta) {
  const Index m = f.cols();
  if (s < 1 || s > m) {
    throw DimensionError("compute_rip_report: S out of range");
  }
  RipReport report;
  report.s = s;
  report.mode = mode;
  SeededRng rng(seed);

  for (Index sp = 1; sp <= std::min<Index>(3 * s, m); ++sp) {
    if (mode == RipMode::Exact) {
      try {
        report.delta[sp] = delta_exact(f, sp, cap);
      } catch (const EnumerationCapError&) {
        break;  // larger subsets only get more expensive
      }
    } else {
      report.delta[sp] = delta_sampled(f, sp, samples, rng);
    }
  }

  std::vector<std::pair<Index, Index>> pairs = {{s, s}, {s, 2 * s}};
  pairs.insert(pairs.end(), extra_theta.begin(), extra_theta.end());
  for (const auto& [s1, s2] : pairs) {
    if (s1 < 1 || s2 < 1 || s1 + s2 > m || report.theta.count({s1, s2})) {
      continue;
    }
    if (mode == RipMode::Exact) {
      try {
        report.theta[{s1, s2}] = theta_exact(f, s1, s2, cap);
      } catch (const EnumerationCapError&) {
      }
    } else {
      report.theta[{s1, s2}] = theta_sampled(f, s1, s2, samples, rng);
    }
  }

  const auto delta_it = report.delta.find(s);
  const auto theta_ss = report.theta.find({s, s});
  const auto theta_s2s = report.theta.find({s, 2 * s});
  if (delta_it != report.delta.end() && theta_ss != report.theta.end() &&
      theta_s2s != report.theta.end()) {
    report.exact_recovery_condition =
        delta_it->second + theta_ss->second + theta_s2s->second;
    report.compressible_recovery_condition =
        delta_it->second + 2.0 * theta_ss->second + theta_s2s->second;
  }
  return report;
}

}  // namespace l1codec
