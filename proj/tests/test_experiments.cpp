#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "l1codec/experiments.hpp"
#include "l1codec/matrix_io.hpp"
#include "support/test_util.hpp"

using namespace l1codec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.m = 32;
  config.oversample = 2;
  config.corruption_fractions = {0.0, 0.0625, 0.125};
  config.trials_per_point = 10;
  config.master_seed = 5;
  return config;
}

}  // namespace

TEST_CASE("zero corruption always recovers") {
  SeededRng matrix_rng(131);
  const Matrix a = sample_gaussian_matrix(32, 16, 1.0, matrix_rng);
  SeededRng trial_rng(split_seed(99, 1));
  const TrialRecord rec = run_decoding_trial(a, 0.0, trial_rng);
  CHECK(rec.recovered);
  CHECK(rec.max_abs_error <= 1e-8);
  CHECK(rec.solver_status == LpStatus::Optimal);
}

TEST_CASE("five percent corruption at m = 128 recovers almost surely") {
  SeededRng matrix_rng(132);
  const Matrix a = sample_gaussian_matrix(128, 64, 1.0, matrix_rng);
  int recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SeededRng rng(split_seed(777, 1 + trial));
    recovered += run_decoding_trial(a, 0.05, rng).recovered ? 1 : 0;
  }
  CHECK(recovered >= 99);
}

TEST_CASE("near-half corruption fails for most seeds") {
  SeededRng matrix_rng(133);
  const Matrix a = sample_gaussian_matrix(64, 32, 1.0, matrix_rng);
  int recovered = 0;
  const int trials = 30;
  for (int trial = 0; trial < trials; ++trial) {
    SeededRng rng(split_seed(778, 1 + trial));
    recovered += run_decoding_trial(a, 0.45, rng).recovered ? 1 : 0;
  }
  CHECK(recovered < trials / 2);
}

TEST_CASE("fractions at or past one half are rejected") {
  SeededRng rng(134);
  const Matrix a = sample_gaussian_matrix(16, 8, 1.0, rng);
  CHECK_THROWS_AS(run_decoding_trial(a, 0.5, rng), DomainError);
  CHECK_THROWS_AS(run_decoding_trial(a, -0.01, rng), DomainError);

  ExperimentConfig config = small_config();
  config.corruption_fractions = {0.1, 0.5};
  CHECK_THROWS_AS(config.validate(), DomainError);
  config.corruption_fractions = {0.2, 0.1};
  CHECK_THROWS_AS(config.validate(), DimensionError);
  config.corruption_fractions = {0.1};
  config.oversample = 3;  // 32 not divisible
  CHECK_THROWS_AS(config.validate(), DimensionError);
}

TEST_CASE("success curve: full recovery at zero, breakpoint bookkeeping") {
  const SuccessCurve curve = run_success_curve(small_config());
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].fraction == 0.0);
  CHECK(curve.points[0].success_rate == 1.0);
  REQUIRE(curve.breakpoint.has_value());
  double expected = 0.0;
  for (const CurvePoint& p : curve.points) {
    if (p.success_rate == 1.0 && p.fraction > expected) {
      expected = p.fraction;
    }
  }
  CHECK(*curve.breakpoint == expected);
}

TEST_CASE("success rate is monotone along the grid at m = 128") {
  ExperimentConfig config;
  config.m = 128;
  config.oversample = 2;
  config.corruption_fractions = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  config.trials_per_point = 50;
  config.master_seed = 42;
  const SuccessCurve curve = run_success_curve(config);
  REQUIRE(curve.points.size() == 6);
  // One small inversion is tolerated as sampling noise.
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    CHECK(curve.points[i + 1].success_rate <=
          curve.points[i].success_rate + 0.04);
  }
  CHECK(curve.points.front().success_rate == 1.0);
  CHECK(curve.points.back().success_rate < 1.0);
}

TEST_CASE("identical configs give identical curves and identical bytes") {
  const ExperimentConfig config = small_config();
  const SuccessCurve a = run_success_curve(config);
  const SuccessCurve b = run_success_curve(config);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].success_rate == b.points[i].success_rate);
  }

  const fs::path file_a = fs::temp_directory_path() / "l1codec_curve_a.csv";
  const fs::path file_b = fs::temp_directory_path() / "l1codec_curve_b.csv";
  emit_results(a, file_a);
  emit_results(b, file_b);
  CHECK(slurp(file_a) == slurp(file_b));
  emit_results(a, file_a);  // overwrite in place
  CHECK(slurp(file_a) == slurp(file_b));
  fs::remove(file_a);
  fs::remove(file_b);
}

TEST_CASE("worker count does not change the records") {
  const ExperimentConfig config = small_config();
  setenv("L1CODEC_THREADS", "1", 1);
  const SuccessCurve serial = run_success_curve(config);
  setenv("L1CODEC_THREADS", "3", 1);
  const SuccessCurve threaded = run_success_curve(config);
  unsetenv("L1CODEC_THREADS");
  REQUIRE(serial.points.size() == threaded.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].success_rate == threaded.points[i].success_rate);
  }
}

TEST_CASE("per-trial matrix resampling stays deterministic") {
  ExperimentConfig config = small_config();
  config.resample_coding_matrix = true;
  const SuccessCurve a = run_success_curve(config);
  const SuccessCurve b = run_success_curve(config);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].success_rate == b.points[i].success_rate);
  }
  CHECK(a.points[0].success_rate == 1.0);
}

TEST_CASE("alternative error distributions still decode mild corruption") {
  SeededRng matrix_rng(135);
  const Matrix a = sample_gaussian_matrix(64, 32, 1.0, matrix_rng);
  for (ErrorDist dist : {ErrorDist::Rademacher, ErrorDist::Cauchy}) {
    int recovered = 0;
    for (int trial = 0; trial < 10; ++trial) {
      SeededRng rng(split_seed(779, 1 + trial));
      recovered +=
          run_decoding_trial(a, 0.05, rng, 1e-4, dist).recovered ? 1 : 0;
    }
    CHECK(recovered >= 9);
  }
}

TEST_CASE("compressible signals attain the power-law envelope exactly") {
  SeededRng rng(136);
  const Vector alpha = generate_compressible(4, 1.0, 1.0, rng);
  Vector mags = alpha.cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(),
            [](double a, double b) { return a > b; });
  CHECK(mags(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mags(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mags(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mags(3) == doctest::Approx(0.25).epsilon(1e-15));

  const Vector big = generate_compressible(64, 1.5, 2.0, rng);
  Vector sorted = big.cwiseAbs();
  std::sort(sorted.data(), sorted.data() + sorted.size(),
            [](double a, double b) { return a > b; });
  double norm_sq = 0.0;
  for (Index k = 1; k <= 64; ++k) {
    const double envelope = 2.0 * std::pow(static_cast<double>(k), -1.5);
    CHECK(sorted(k - 1) == doctest::Approx(envelope).epsilon(1e-12));
    norm_sq += envelope * envelope;
  }
  CHECK(big.squaredNorm() == doctest::Approx(norm_sq).epsilon(1e-12));
}

TEST_CASE("oracle truncation error matches a direct partial sum") {
  double direct = 0.0;
  for (Index k = 17; k <= 64; ++k) {
    direct += std::pow(static_cast<double>(k), -3.0);
  }
  CHECK(oracle_truncation_error(64, 1.5, 1.0, 16) ==
        doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
  CHECK(oracle_truncation_error(64, 1.5, 1.0, 64) == 0.0);
}

TEST_CASE("square systems recover the compressible signal exactly") {
  CompressibleConfig config;
  config.m = 32;
  config.s = 1.5;
  config.b = 1.0;
  config.k_grid = {32};
  config.trials = 3;
  config.master_seed = 11;
  const CompressTable table = run_compressible_experiment(config);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].solver_failures == 0);
  CHECK(table.rows[0].mean_bp_error <= 1e-6);
  CHECK(table.rows[0].oracle_error == 0.0);
}

TEST_CASE("undersampled recovery error shrinks as K grows") {
  CompressibleConfig config;
  config.m = 64;
  config.s = 1.5;
  config.b = 1.0;
  config.k_grid = {8, 32};
  config.trials = 5;
  config.master_seed = 12;
  const CompressTable table = run_compressible_experiment(config);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].mean_bp_error > table.rows[1].mean_bp_error);
  CHECK(table.rows[1].mean_bp_error < 0.2);
}

TEST_CASE("csv emission: headers, round-trip precision, gnuplot echo") {
  SuccessCurve empty;
  const fs::path empty_path =
      fs::temp_directory_path() / "l1codec_empty_curve.csv";
  emit_results(empty, empty_path);
  CHECK(slurp(empty_path) == "fraction,success_rate,trials\n");
  fs::remove(empty_path);

  SuccessCurve curve;
  curve.points = {{1.0 / 3.0, 0.97, 100}, {0.2, 1.0, 100}, {0.25, 0.5, 4}};
  const fs::path path = fs::temp_directory_path() / "l1codec_three.csv";
  emit_results(curve, path);
  const std::string text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "fraction,success_rate,trials");
  std::string first;
  std::getline(lines, first);
  const double parsed = std::strtod(first.c_str(), nullptr);
  CHECK(parsed == 1.0 / 3.0);
  fs::remove(path);

  CompressTable table;
  table.rows = {{16, 0.125, 0.0625, 0}};
  const fs::path gp = fs::temp_directory_path() / "l1codec_table.gp";
  emit_results(table, gp, EmitFormat::Gnuplot);
  const std::string gp_text = slurp(gp);
  CHECK(gp_text.find("# l1codec compressible recovery") == 0);
  CHECK(gp_text.find("K,bp_error,oracle_error\n") != std::string::npos);
  CHECK(gp_text.find("16,0.125,0.0625\n") != std::string::npos);
  fs::remove(gp);

  CHECK_THROWS_AS(emit_results(curve, "/nonexistent/dir/file.csv"), IoError);
}
