#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "l1codec/linalg.hpp"
#include "l1codec/rng.hpp"

namespace l1codec {

// Exact restricted-isometry computation is a max over all column subsets;
// past this many subsets the exact routines refuse and callers should fall
// back to randomized lower-bound sampling.
inline constexpr std::uint64_t kSubsetCap = 2'000'000;
inline constexpr std::uint64_t kSparseSearchCap = 1'000'000;
inline constexpr std::uint64_t kDefaultSampleCount = 100'000;

// C(n, k) saturated at 2^63 so cap comparisons never overflow.
std::uint64_t binomial_capped(Index n, Index k);

// delta_S: max over |T| = S of max(lambda_max - 1, 1 - lambda_min) of the
// Gram matrix of the selected columns. Restricting to exactly S columns is
// enough because the extremal eigenvalues are monotone in the subset.
double delta_exact(const Matrix& f, Index s, std::uint64_t cap = kSubsetCap);

// delta_1 without enumeration: max_j |  ||v_j||^2 - 1 |.
double delta_one(const Matrix& f);

// Randomized lower bound on delta_S from `samples` random subsets.
double delta_sampled(const Matrix& f, Index s, std::uint64_t samples,
                     SeededRng& rng);

// theta_{S,S'}: max over disjoint |T| = S, |T'| = S' of the largest
// singular value of F_T^T F_{T'}.
double theta_exact(const Matrix& f, Index s, Index s_prime,
                   std::uint64_t cap = kSubsetCap);

double theta_sampled(const Matrix& f, Index s, Index s_prime,
                     std::uint64_t samples, SeededRng& rng);

// Both sides of theta_{S,S'} <= delta_{S+S'} <= theta_{S,S'} +
// max(delta_S, delta_{S'}), evaluated with exact constants and 1e-9 slack.
struct SandwichVerdict {
  bool lhs_ok;
  bool rhs_ok;
  double theta;
  double delta_sum;     // delta_{S+S'}
  double delta_s;
  double delta_s_prime;
};

SandwichVerdict check_theta_delta(const Matrix& f, Index s, Index s_prime);

// delta_S + theta_{S,S} + theta_{S,2S} and whether it is strictly below 1,
// the sufficient condition for exact l1 recovery of S-sparse vectors.
struct RecoveryCondition {
  double value;
  bool holds;
};

RecoveryCondition recovery_condition(const Matrix& f, Index s,
                                     std::uint64_t cap = kSubsetCap);

// Exhaustive sparsest-solution search: supports of increasing size, least
// squares on each, accepted when the residual is <= 1e-8. `unique` reports
// whether exactly one support of the winning size fits.
struct L0Result {
  Vector d;
  bool unique;
};

L0Result l0_decode_bruteforce(const Matrix& f, const Vector& y_tilde,
                              Index s_max,
                              std::uint64_t cap = kSparseSearchCap);

// w = F_T (F_T^T F_T)^{-1} c matching <w, v_j> = c_j on T, plus the
// reported l2 budget theta_{S,S} ||c|| / (1 - delta_S) for the exceptional
// off-support mass (NaN when the exact constants are not computable).
struct DualL2Result {
  Vector w;
  double exceptional_budget;
};

DualL2Result dual_certificate_l2(const Matrix& f, const IndexSet& t,
                                 const Vector& c_t);

struct DualCertificate {
  Vector w;
  std::vector<Index> support;
  Vector on_support_values;   // <w, v_j> for j in support
  double off_support_max;     // max_{j not in support} |<w, v_j>|
  int iterations;
  bool converged;
  // l2 mass of each iteration's exceptional-set values; the stopping rule
  // and the geometric-decay checks read this trace.
  std::vector<double> exceptional_masses;
};

// Alternating-sign iteration of the interpolation construction: each step
// re-interpolates the previous step's values on its exceptional set while
// pinning zeros on the original support. Stops when the new exceptional
// mass falls below tol.
DualCertificate dual_certificate_linf(const Matrix& f, const IndexSet& t,
                                      const Vector& signs, int max_iter = 100,
                                      double tol = 1e-10);

// |<w, v_j> - signs_j| <= 1e-6 on the support and |<w, v_j>| <= 1 - 1e-9
// off it: the exact-reconstruction certificate.
bool verify_certificate(const Matrix& f, const IndexSet& t,
                        const Vector& signs, const Vector& w);

enum class RipMode { Exact, SampledLowerBound };

const char* to_string(RipMode mode);

struct RipReport {
  Index s = 0;
  std::map<Index, double> delta;                          // S' -> delta_{S'}
  std::map<std::pair<Index, Index>, double> theta;        // (S1,S2) -> theta
  RipMode mode = RipMode::Exact;
  // delta_S + theta_{S,S} + theta_{S,2S}; gates exact sparse recovery.
  std::optional<double> exact_recovery_condition;
  // delta_S + 2 theta_{S,S} + theta_{S,2S}; gates compressible recovery.
  std::optional<double> compressible_recovery_condition;
};

// delta_{S'} for S' = 1..3S plus the theta pairs the conditions need.
// Exact mode enumerates (and throws past the cap); sampled mode reports
// randomized lower bounds.
RipReport compute_rip_report(const Matrix& f, Index s, RipMode mode,
                             std::uint64_t cap = kSubsetCap,
                             std::uint64_t samples = kDefaultSampleCount,
                             std::uint64_t seed = 1,
                             std::vector<std::pair<Index, Index>>
                                 extra_theta = {});

}  // namespace l1codec
