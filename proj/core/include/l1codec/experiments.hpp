#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "l1codec/decode.hpp"
#include "l1codec/linalg.hpp"

namespace l1codec {

enum class ErrorDist { Gauss, Rademacher, Cauchy };

const char* to_string(ErrorDist dist);

struct ExperimentConfig {
  Index m = 512;
  Index oversample = 2;  // m / n
  std::vector<double> corruption_fractions;
  int trials_per_point = 100;
  std::uint64_t master_seed = 42;
  double success_tolerance = 1e-4;
  // One coding matrix per curve by default; when set, every trial draws a
  // fresh one from its own child stream.
  bool resample_coding_matrix = false;
  ErrorDist error_dist = ErrorDist::Gauss;

  Index code_length() const { return m / oversample; }
  void validate() const;
};

struct TrialRecord {
  double fraction = 0.0;
  int trial_index = 0;
  bool recovered = false;
  double max_abs_error = 0.0;
  LpStatus solver_status = LpStatus::IterLimit;
  double wall_time = 0.0;  // seconds
};

struct CurvePoint {
  double fraction;
  double success_rate;
  int trials;
};

struct SuccessCurve {
  std::vector<CurvePoint> points;
  // Largest grid fraction with every trial recovered; empty when none.
  std::optional<double> breakpoint;
  ExperimentConfig config;
};

// One decoding trial: S = round(fraction * m) corrupted entries on a
// uniform support, plaintext and error values from the given stream.
// Draw order is pinned (support, error values, plaintext) so trial streams
// are reproducible.
TrialRecord run_decoding_trial(const Matrix& a, double fraction,
                               SeededRng& rng, double success_tolerance = 1e-4,
                               ErrorDist dist = ErrorDist::Gauss);

// Full success-rate sweep over the fraction grid. Trials run concurrently
// under per-trial child seeds, so results are identical regardless of
// worker count or ordering. L1CODEC_THREADS caps workers (0 = auto).
SuccessCurve run_success_curve(const ExperimentConfig& config);

// Signal with sorted magnitudes exactly B k^{-s}, random signs, random
// positions: the extremal element of the power-law ball.
Vector generate_compressible(Index m, double s, double b, SeededRng& rng);

// Best K-term truncation error B (sum_{k>K} k^{-2s})^{1/2} in l2.
double oracle_truncation_error(Index m, double s, double b, Index k);

struct CompressibleConfig {
  Index m = 256;
  double s = 1.5;
  double b = 1.0;
  std::vector<Index> k_grid;
  int trials = 20;
  std::uint64_t master_seed = 7;
  void validate() const;
};

struct CompressRow {
  Index k;
  double mean_bp_error;   // mean l2 recovery error over successful trials
  double oracle_error;
  int solver_failures;
};

struct CompressTable {
  std::vector<CompressRow> rows;
  CompressibleConfig config;
};

// Per K: Gaussian K x m measurements with entry variance 1/K, recovery by
// basis pursuit, l2 error against the planted signal, averaged over trials.
CompressTable run_compressible_experiment(const CompressibleConfig& config);

enum class EmitFormat { Csv, Gnuplot };

// CSV "fraction,success_rate,trials"; gnuplot format prepends a '#' header
// echoing the configuration. Reruns with the same inputs are byte-identical.
void emit_results(const SuccessCurve& curve, const std::filesystem::path& path,
                  EmitFormat format = EmitFormat::Csv);

// CSV "K,bp_error,oracle_error".
void emit_results(const CompressTable& table,
                  const std::filesystem::path& path,
                  EmitFormat format = EmitFormat::Csv);

// Worker count from L1CODEC_THREADS (0 or unset = hardware concurrency).
int worker_count();

}  // namespace l1codec
