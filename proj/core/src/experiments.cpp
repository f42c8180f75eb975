#include "l1codec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "l1codec/matrix_io.hpp"

namespace l1codec {

const char* to_string(ErrorDist dist) {
  switch (dist) {
    case ErrorDist::Gauss:
      return "gauss";
    case ErrorDist::Rademacher:
      return "rademacher";
    case ErrorDist::Cauchy:
      return "cauchy";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (m < 2 || oversample < 1 || m % oversample != 0) {
    throw DimensionError(
        "ExperimentConfig: m must be a positive multiple of the oversample "
        "ratio");
  }
  if (m == oversample) {
    throw DimensionError("ExperimentConfig: code length would be m");
  }
  if (trials_per_point < 1) {
    throw DimensionError("ExperimentConfig: trials_per_point must be >= 1");
  }
  if (corruption_fractions.empty()) {
    throw DimensionError("ExperimentConfig: empty fraction grid");
  }
  double prev = -1.0;
  for (double fr : corruption_fractions) {
    if (!(fr >= 0.0 && fr < 0.5)) {
      throw DomainError(
          "ExperimentConfig: fractions must lie in [0, 0.5); half-corruption "
          "is undecodable");
    }
    if (fr <= prev) {
      throw DimensionError(
          "ExperimentConfig: fraction grid must be strictly increasing");
    }
    prev = fr;
  }
  if (!(success_tolerance > 0.0)) {
    throw DomainError("ExperimentConfig: success tolerance must be positive");
  }
}

void CompressibleConfig::validate() const {
  if (m < 1) {
    throw DimensionError("CompressibleConfig: m must be >= 1");
  }
  if (!(s >= 1.0)) {
    throw DomainError("CompressibleConfig: decay exponent s must be >= 1");
  }
  if (!(b > 0.0)) {
    throw DomainError("CompressibleConfig: amplitude B must be positive");
  }
  if (k_grid.empty()) {
    throw DimensionError("CompressibleConfig: empty K grid");
  }
  for (Index k : k_grid) {
    if (k < 1 || k > m) {
      throw DimensionError("CompressibleConfig: K values must lie in [1, m]");
    }
  }
  if (trials < 1) {
    throw DimensionError("CompressibleConfig: trials must be >= 1");
  }
}

int worker_count() {
  int workers = 0;
  if (const char* env = std::getenv("L1CODEC_THREADS")) {
    workers = std::atoi(env);
    if (workers < 0) {
      workers = 0;
    }
  }
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  return std::max(workers, 1);
}

namespace {

double draw_error_value(SeededRng& rng, ErrorDist dist) {
  switch (dist) {
    case ErrorDist::Gauss:
      return rng.normal();
    case ErrorDist::Rademacher:
      return (rng.next_u64() & 1u) ? 1.0 : -1.0;
    case ErrorDist::Cauchy:
      return std::tan(std::numbers::pi * (rng.uniform01() - 0.5));
  }
  return 0.0;
}

// Run fn(i) for i in [0, total) across the worker pool.
template <typename Fn>
void parallel_for(std::uint64_t total, Fn&& fn) {
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(worker_count(), total));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < total; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= total) {
          return;
        }
        fn(i);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
}

}  // namespace

TrialRecord run_decoding_trial(const Matrix& a, double fraction,
                               SeededRng& rng, double success_tolerance,
                               ErrorDist dist) {
  if (!(fraction >= 0.0 && fraction < 0.5)) {
    throw DomainError(
        "run_decoding_trial: fraction must lie in [0, 0.5)");
  }
  const Index m = a.rows();
  const Index n = a.cols();
  const Index s = static_cast<Index>(std::llround(fraction * m));

  // Pinned draw order: support, error values, plaintext.
  std::vector<Index> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const auto j =
        i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(m - i)));
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(j)]);
  }
  std::sort(perm.begin(), perm.begin() + s);

  Vector e = Vector::Zero(m);
  for (Index i = 0; i < s; ++i) {
    e(perm[static_cast<std::size_t>(i)]) = draw_error_value(rng, dist);
  }

  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = rng.normal();
  }

  const Vector y = a * x + e;
  const auto start = std::chrono::steady_clock::now();
  const DecodeResult result = decode_l1(a, y);
  const auto stop = std::chrono::steady_clock::now();

  TrialRecord record;
  record.fraction = fraction;
  record.solver_status = result.status;
  record.wall_time = std::chrono::duration<double>(stop - start).count();
  record.max_abs_error = (result.f_hat - x).lpNorm<Eigen::Infinity>();
  const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
  record.recovered = result.status == LpStatus::Optimal &&
                     record.max_abs_error <= success_tolerance * scale;
  return record;
}

SuccessCurve run_success_curve(const ExperimentConfig& config) {
  config.validate();
  const Index n = config.code_length();

  // Child stream 0 owns the shared coding matrix; trial i uses stream i+1.
  Matrix shared_a;
  if (!config.resample_coding_matrix) {
    SeededRng matrix_rng(split_seed(config.master_seed, 0));
    shared_a = sample_gaussian_matrix(config.m, n, 1.0, matrix_rng);
  }

  const std::uint64_t n_points = config.corruption_fractions.size();
  const std::uint64_t trials = static_cast<std::uint64_t>(
      config.trials_per_point);
  std::vector<TrialRecord> records(n_points * trials);

  parallel_for(n_points * trials, [&](std::uint64_t flat) {
    const std::uint64_t point = flat / trials;
    const std::uint64_t trial = flat % trials;
    const double fraction = config.corruption_fractions[point];
    SeededRng rng(split_seed(config.master_seed, 1 + flat));
    Matrix local_a;
    const Matrix* a = &shared_a;
    if (config.resample_coding_matrix) {
      local_a = sample_gaussian_matrix(config.m, n, 1.0, rng);
      a = &local_a;
    }
    TrialRecord rec = run_decoding_trial(*a, fraction, rng,
                                         config.success_tolerance,
                                         config.error_dist);
    rec.trial_index = static_cast<int>(trial);
    records[flat] = std::move(rec);
  });

  SuccessCurve curve;
  curve.config = config;
  curve.points.reserve(n_points);
  for (std::uint64_t point = 0; point < n_points; ++point) {
    int recovered = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      recovered += records[point * trials + trial].recovered ? 1 : 0;
    }
    const double fraction = config.corruption_fractions[point];
    curve.points.push_back({fraction,
                            static_cast<double>(recovered) /
                                static_cast<double>(trials),
                            static_cast<int>(trials)});
    if (recovered == static_cast<int>(trials)) {
      if (!curve.breakpoint || fraction > *curve.breakpoint) {
        curve.breakpoint = fraction;
      }
    }
  }
  return curve;
}

Vector generate_compressible(Index m, double s, double b, SeededRng& rng) {
  if (m < 1) {
    throw DimensionError("generate_compressible: m must be >= 1");
  }
  if (!(s >= 1.0) || !(b > 0.0)) {
    throw DomainError("generate_compressible: need s >= 1 and B > 0");
  }
  Vector alpha(m);
  for (Index k = 0; k < m; ++k) {
    const double magnitude = b * std::pow(static_cast<double>(k + 1), -s);
    alpha(k) = (rng.next_u64() & 1u) ? magnitude : -magnitude;
  }
  for (Index i = m - 1; i > 0; --i) {
    const auto j =
        static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(alpha(i), alpha(j));
  }
  return alpha;
}

double oracle_truncation_error(Index m, double s, double b, Index k) {
  double sum = 0.0;
  for (Index j = m; j > k; --j) {  // small terms first
    sum += std::pow(static_cast<double>(j), -2.0 * s);
  }
  return b * std::sqrt(sum);
}

CompressTable run_compressible_experiment(const CompressibleConfig& config) {
  config.validate();
  const std::uint64_t trials = static_cast<std::uint64_t>(config.trials);
  const std::uint64_t cells = config.k_grid.size() * trials;

  struct CellResult {
    double error = 0.0;
    bool ok = false;
  };
  std::vector<CellResult> results(cells);

  parallel_for(cells, [&](std::uint64_t flat) {
    const std::uint64_t k_index = flat / trials;
    const Index k = config.k_grid[k_index];
    SeededRng rng(split_seed(config.master_seed, 1 + flat));
    // Pinned draw order: measurement matrix, then signal.
    const Matrix f = sample_gaussian_matrix(k, config.m,
                                            1.0 / static_cast<double>(k), rng);
    const Vector alpha =
        generate_compressible(config.m, config.s, config.b, rng);
    const Vector y = f * alpha;
    const BasisPursuitResult bp = basis_pursuit(f, y);
    if (bp.status == LpStatus::Optimal) {
      results[flat] = {(alpha - bp.d).norm(), true};
    }
  });

  CompressTable table;
  table.config = config;
  for (std::size_t k_index = 0; k_index < config.k_grid.size(); ++k_index) {
    double sum = 0.0;
    int ok = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      const CellResult& cell = results[k_index * trials + trial];
      if (cell.ok) {
        sum += cell.error;
        ++ok;
      }
    }
    const Index k = config.k_grid[k_index];
    table.rows.push_back(
        {k, ok > 0 ? sum / ok : std::numeric_limits<double>::quiet_NaN(),
         oracle_truncation_error(config.m, config.s, config.b, k),
         static_cast<int>(trials) - ok});
  }
  return table;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace

void emit_results(const SuccessCurve& curve, const std::filesystem::path& path,
                  EmitFormat format) {
  std::ofstream out = open_output(path);
  if (format == EmitFormat::Gnuplot) {
    const ExperimentConfig& c = curve.config;
    out << "# l1codec success curve\n"
        << "# m = " << c.m << "\n"
        << "# oversample = " << c.oversample << "\n"
        << "# trials = " << c.trials_per_point << "\n"
        << "# seed = " << c.master_seed << "\n"
        << "# success_tolerance = " << format_real(c.success_tolerance)
        << "\n"
        << "# resample_A = " << (c.resample_coding_matrix ? 1 : 0) << "\n"
        << "# error_dist = " << to_string(c.error_dist) << "\n";
  }
  out << "fraction,success_rate,trials\n";
  for (const CurvePoint& p : curve.points) {
    out << format_real(p.fraction) << ',' << format_real(p.success_rate)
        << ',' << p.trials << '\n';
  }
  finish_output(out, path);
}

void emit_results(const CompressTable& table,
                  const std::filesystem::path& path, EmitFormat format) {
  std::ofstream out = open_output(path);
  if (format == EmitFormat::Gnuplot) {
    const CompressibleConfig& c = table.config;
    out << "# l1codec compressible recovery\n"
        << "# m = " << c.m << "\n"
        << "# s = " << format_real(c.s) << "\n"
        << "# B = " << format_real(c.b) << "\n"
        << "# trials = " << c.trials << "\n"
        << "# seed = " << c.master_seed << "\n";
  }
  out << "K,bp_error,oracle_error\n";
  for (const CompressRow& row : table.rows) {
    out << row.k << ',' << format_real(row.mean_bp_error) << ','
        << format_real(row.oracle_error) << '\n';
  }
  finish_output(out, path);
}

}  // namespace l1codec
