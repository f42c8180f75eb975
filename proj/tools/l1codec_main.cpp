// l1codec command line: decoding, restricted-isometry reports, closed-form
// bounds, dual certificates, and the Monte Carlo experiment harness.
//
// Exit codes: 0 success, 1 usage error, 2 solver/numeric failure, 3 I/O
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "l1codec/bounds.hpp"
#include "l1codec/decode.hpp"
#include "l1codec/experiments.hpp"
#include "l1codec/matrix_io.hpp"
#include "l1codec/rip.hpp"

namespace {

using namespace l1codec;

std::string real_str(double v) { return format_real(v); }

std::vector<double> parse_fraction_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double start = 0.0, step = 0.0, stop = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 ||
        step <= 0.0) {
      throw DomainError("bad fraction grid '" + spec +
                        "', expected start:step:stop");
    }
    const auto count =
        static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      grid.push_back(start + static_cast<double>(i) * step);
    }
    return grid;
  }
  std::string token;
  for (std::size_t pos = 0; pos <= spec.size(); ++pos) {
    if (pos == spec.size() || spec[pos] == ',') {
      if (!token.empty()) {
        grid.push_back(std::stod(token));
        token.clear();
      }
    } else {
      token.push_back(spec[pos]);
    }
  }
  if (grid.empty()) {
    throw DomainError("empty fraction grid '" + spec + "'");
  }
  return grid;
}

std::vector<Index> parse_index_list(const std::string& spec) {
  std::vector<Index> out;
  std::string token;
  for (std::size_t pos = 0; pos <= spec.size(); ++pos) {
    if (pos == spec.size() || spec[pos] == ',') {
      if (!token.empty()) {
        out.push_back(static_cast<Index>(std::stoll(token)));
        token.clear();
      }
    } else {
      token.push_back(spec[pos]);
    }
  }
  if (out.empty()) {
    throw DomainError("empty index list '" + spec + "'");
  }
  return out;
}

Vector parse_sign_list(const std::string& spec) {
  std::vector<double> values;
  std::string token;
  for (std::size_t pos = 0; pos <= spec.size(); ++pos) {
    if (pos == spec.size() || spec[pos] == ',') {
      if (token == "+" || token == "+1" || token == "1") {
        values.push_back(1.0);
      } else if (token == "-" || token == "-1") {
        values.push_back(-1.0);
      } else if (!token.empty()) {
        values.push_back(std::stod(token));
      }
      token.clear();
    } else {
      token.push_back(spec[pos]);
    }
  }
  if (values.empty()) {
    throw DomainError("empty sign list '" + spec + "'");
  }
  Vector v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v(static_cast<Index>(i)) = values[i];
  }
  return v;
}

struct DecodeArgs {
  std::string matrix_path;
  std::string received_path;
  std::string out_path;
  ToleranceSettings tol;
};

int cmd_decode(const DecodeArgs& args) {
  const Matrix a = read_matrix(args.matrix_path);
  const Vector y = read_vector(args.received_path);
  const DecodeResult result = decode_l1(a, y, args.tol);
  std::cout << "status = " << to_string(result.status) << "\n";
  if (result.status != LpStatus::Optimal) {
    std::cerr << "error: decoder did not reach optimality ("
              << to_string(result.status) << ")\n";
    return 2;
  }
  std::cout << "objective = " << real_str(result.objective) << "\n";
  Index corrupted = 0;
  const double scale = std::max(1.0, y.lpNorm<Eigen::Infinity>());
  for (Index i = 0; i < result.e_hat.size(); ++i) {
    if (std::abs(result.e_hat(i)) > 1e-6 * scale) {
      ++corrupted;
    }
  }
  std::cout << "corrupted_entries = " << corrupted << "\n";
  if (!args.out_path.empty()) {
    write_vector(args.out_path, result.f_hat);
    std::cout << "wrote " << args.out_path << "\n";
  }
  return 0;
}

struct RicArgs {
  std::string matrix_path;
  Index s = 1;
  std::vector<Index> theta_pair;
  std::string mode = "exact";
  std::string csv_path;
  std::uint64_t seed = 1;
  std::uint64_t cap = kSubsetCap;
  std::uint64_t samples = kDefaultSampleCount;
};

int cmd_ric(const RicArgs& args) {
  const Matrix f = read_matrix(args.matrix_path);
  const RipMode mode =
      args.mode == "sampled" ? RipMode::SampledLowerBound : RipMode::Exact;
  std::vector<std::pair<Index, Index>> extra;
  if (!args.theta_pair.empty()) {
    if (args.theta_pair.size() != 2) {
      throw DomainError("--theta expects exactly two sizes");
    }
    extra.push_back({args.theta_pair[0], args.theta_pair[1]});
  }
  const RipReport report = compute_rip_report(f, args.s, mode, args.cap,
                                              args.samples, args.seed, extra);

  std::cout << "RIP report: F is " << f.rows() << " x " << f.cols()
            << ", S = " << report.s << ", mode = " << to_string(report.mode)
            << "\n";
  for (const auto& [s, value] : report.delta) {
    std::cout << "  delta_" << s << " = " << real_str(value) << "\n";
  }
  for (const auto& [pair, value] : report.theta) {
    std::cout << "  theta_" << pair.first << "," << pair.second << " = "
              << real_str(value) << "\n";
  }
  if (report.exact_recovery_condition) {
    const double v = *report.exact_recovery_condition;
    std::cout << "  exact recovery condition (delta_S + theta_{S,S} + "
                 "theta_{S,2S}) = "
              << real_str(v) << (v < 1.0 ? "  [holds]" : "  [fails]") << "\n";
  }
  if (report.compressible_recovery_condition) {
    const double v = *report.compressible_recovery_condition;
    std::cout << "  compressible recovery condition (delta_S + 2 theta_{S,S}"
                 " + theta_{S,2S}) = "
              << real_str(v) << (v < 1.0 ? "  [holds]" : "  [fails]") << "\n";
  }

  if (!args.csv_path.empty()) {
    std::ofstream out(args.csv_path, std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + args.csv_path);
    }
    out << "quantity,S,Sprime,value,mode\n";
    const char* mode_str = to_string(report.mode);
    for (const auto& [s, value] : report.delta) {
      out << "delta," << s << ",," << real_str(value) << ',' << mode_str
          << "\n";
    }
    for (const auto& [pair, value] : report.theta) {
      out << "theta," << pair.first << ',' << pair.second << ','
          << real_str(value) << ',' << mode_str << "\n";
    }
    if (report.exact_recovery_condition) {
      out << "exact_recovery_condition," << report.s << ",,"
          << real_str(*report.exact_recovery_condition) << ',' << mode_str
          << "\n";
    }
    if (report.compressible_recovery_condition) {
      out << "compressible_recovery_condition," << report.s << ",,"
          << real_str(*report.compressible_recovery_condition) << ','
          << mode_str << "\n";
    }
    out.flush();
    if (!out) {
      throw IoError("write failed for " + args.csv_path);
    }
    std::cout << "wrote " << args.csv_path << "\n";
  }
  return 0;
}

struct BoundsArgs {
  double ratio = 0.0;
  double r = 0.0;
  bool rstar = false;
  bool jroot = false;
  bool finite = false;
  double eps = 0.0;
  std::int64_t p = 0;
  std::vector<double> curve;  // rmin rmax npts
  std::string csv_path;
};

int cmd_bounds(const BoundsArgs& args) {
  BoundQuery query;
  query.gamma = args.ratio;
  query.r = args.r;
  query.epsilon = args.eps;
  query.p = args.p;
  if (args.p > 0) {
    query.m = static_cast<std::int64_t>(
        std::llround(static_cast<double>(args.p) / args.ratio));
  }
  query.validate();

  if (args.r > 0.0) {
    const double value = rho(args.r, args.ratio);
    std::cout << "rho = " << real_str(value) << "\n";
    std::cout << "admissible = " << (value < 1.0 ? "yes" : "no") << "\n";
  }
  if (args.rstar) {
    if (args.finite) {
      std::cout << "r_star_finite = "
                << real_str(r_star_finite(args.ratio, args.eps)) << "\n";
    } else {
      std::cout << "r_star = " << real_str(r_star(args.ratio)) << "\n";
    }
  }
  if (args.p > 0) {
    std::cout << "eta_p = " << real_str(eta_p(args.p, args.ratio)) << "\n";
  }
  if (args.jroot) {
    std::cout << "j_root = " << real_str(j_limit_root()) << "\n";
  }
  if (!args.curve.empty()) {
    if (args.curve.size() != 3) {
      throw DomainError("--curve expects rmin rmax npts");
    }
    const double rmin = args.curve[0];
    const double rmax = args.curve[1];
    const int npts = static_cast<int>(args.curve[2]);
    if (npts < 2 || rmin <= 0.0 || rmax <= rmin) {
      throw DomainError("--curve expects 0 < rmin < rmax and npts >= 2");
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.csv_path.empty()) {
      file.open(args.csv_path, std::ios::trunc);
      if (!file) {
        throw IoError("cannot write " + args.csv_path);
      }
      out = &file;
    }
    *out << "r,rho\n";
    for (int i = 0; i < npts; ++i) {
      const double r =
          rmin + (rmax - rmin) * static_cast<double>(i) / (npts - 1);
      *out << real_str(r) << ',' << real_str(rho(r, args.ratio)) << "\n";
    }
    if (!args.csv_path.empty()) {
      file.flush();
      if (!file) {
        throw IoError("write failed for " + args.csv_path);
      }
      std::cout << "wrote " << args.csv_path << "\n";
    }
  }
  return 0;
}

struct CertificateArgs {
  std::string matrix_path;
  std::string support_spec;
  std::string signs_spec;
  int max_iter = 100;
  double tol = 1e-10;
};

int cmd_certificate(const CertificateArgs& args) {
  const Matrix f = read_matrix(args.matrix_path);
  const std::vector<Index> support = parse_index_list(args.support_spec);
  const Vector signs = parse_sign_list(args.signs_spec);
  const IndexSet t(support, f.cols());
  const DualCertificate cert =
      dual_certificate_linf(f, t, signs, args.max_iter, args.tol);

  std::cout << "support size = " << t.size() << "\n";
  std::cout << "iterations = " << cert.iterations << "\n";
  std::cout << "converged = " << (cert.converged ? "yes" : "no") << "\n";
  double on_dev = 0.0;
  for (Index i = 0; i < t.size(); ++i) {
    on_dev = std::max(on_dev,
                      std::abs(cert.on_support_values(i) - signs(i)));
  }
  std::cout << "on_support_max_deviation = " << real_str(on_dev) << "\n";
  std::cout << "off_support_max = " << real_str(cert.off_support_max)
            << "\n";
  std::cout << "exceptional_mass_trace =";
  for (double mass : cert.exceptional_masses) {
    std::cout << ' ' << real_str(mass);
  }
  std::cout << "\n";

  const Index s = t.size();
  if (3 * s <= f.cols()) {
    try {
      const double delta = delta_exact(f, s);
      const double theta_ss = theta_exact(f, s, s);
      const double theta_s2s = theta_exact(f, s, 2 * s);
      if (delta + theta_s2s < 1.0) {
        const double bound = theta_ss / (1.0 - delta - theta_s2s);
        std::cout << "off_support_bound = " << real_str(bound)
                  << (cert.off_support_max <= bound + 1e-8 ? "  [respected]"
                                                           : "  [violated]")
                  << "\n";
      } else {
        std::cout
            << "off_support_bound = n/a (delta_S + theta_{S,2S} >= 1)\n";
      }
    } catch (const EnumerationCapError&) {
      std::cout << "off_support_bound = n/a (enumeration cap)\n";
    }
  }

  const bool verified = verify_certificate(f, t, signs, cert.w);
  std::cout << "verified = " << (verified ? "yes" : "no") << "\n";
  if (!cert.converged) {
    std::cerr << "error: certificate iteration did not converge after "
              << cert.iterations << " iterations\n";
    return 2;
  }
  return 0;
}

struct CurveArgs {
  ExperimentConfig config;
  std::string fractions_spec = "0.05:0.01:0.30";
  std::string error_dist = "gauss";
  std::string csv_path;
  bool gnuplot = false;
};

int cmd_experiment_curve(CurveArgs& args) {
  args.config.corruption_fractions = parse_fraction_grid(args.fractions_spec);
  if (args.error_dist == "gauss") {
    args.config.error_dist = ErrorDist::Gauss;
  } else if (args.error_dist == "rademacher") {
    args.config.error_dist = ErrorDist::Rademacher;
  } else {
    args.config.error_dist = ErrorDist::Cauchy;
  }
  args.config.validate();

  const SuccessCurve curve = run_success_curve(args.config);
  std::size_t done = 0;
  for (const CurvePoint& p : curve.points) {
    ++done;
    std::cerr << "point " << done << "/" << curve.points.size()
              << " fraction=" << p.fraction
              << " success_rate=" << p.success_rate << "\n";
  }
  if (curve.breakpoint) {
    std::cout << "breakpoint = " << real_str(*curve.breakpoint) << "\n";
  } else {
    std::cout << "breakpoint = n/a\n";
  }
  if (!args.csv_path.empty()) {
    emit_results(curve, args.csv_path,
                 args.gnuplot ? EmitFormat::Gnuplot : EmitFormat::Csv);
    std::cout << "wrote " << args.csv_path << "\n";
  }
  return 0;
}

struct CompressArgs {
  CompressibleConfig config;
  std::string k_spec;
  std::string csv_path;
  bool gnuplot = false;
};

int cmd_experiment_compress(CompressArgs& args) {
  args.config.k_grid = parse_index_list(args.k_spec);
  args.config.validate();
  const CompressTable table = run_compressible_experiment(args.config);
  for (const CompressRow& row : table.rows) {
    std::cout << "K = " << row.k
              << "  bp_error = " << real_str(row.mean_bp_error)
              << "  oracle_error = " << real_str(row.oracle_error);
    if (row.solver_failures > 0) {
      std::cout << "  solver_failures = " << row.solver_failures;
    }
    std::cout << "\n";
  }
  if (!args.csv_path.empty()) {
    emit_results(table, args.csv_path,
                 args.gnuplot ? EmitFormat::Gnuplot : EmitFormat::Csv);
    std::cout << "wrote " << args.csv_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"error correction of real-valued linear codes by l1 "
               "minimization"};
  app.require_subcommand(1);

  DecodeArgs decode_args;
  CLI::App* decode = app.add_subcommand(
      "decode", "recover a plaintext from a corrupted codeword");
  decode->add_option("--matrix", decode_args.matrix_path,
                     "coding matrix file (text format)")
      ->required();
  decode->add_option("--received", decode_args.received_path,
                     "received word file")
      ->required();
  decode->add_option("--out", decode_args.out_path,
                     "write the recovered plaintext here");
  decode->add_option("--feas-tol", decode_args.tol.feasibility,
                     "feasibility tolerance");
  decode->add_option("--gap-tol", decode_args.tol.gap,
                     "duality gap tolerance");
  decode->add_option("--max-iter", decode_args.tol.max_iterations,
                     "interior-point iteration cap");

  RicArgs ric_args;
  CLI::App* ric = app.add_subcommand(
      "ric", "restricted isometry and orthogonality constants");
  ric->add_option("--matrix", ric_args.matrix_path, "matrix file")
      ->required();
  ric->add_option("--S", ric_args.s, "sparsity level")->required();
  ric->add_option("--theta", ric_args.theta_pair, "extra theta pair: S1 S2")
      ->expected(2);
  ric->add_option("--mode", ric_args.mode, "exact or sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  ric->add_option("--csv", ric_args.csv_path, "also write a CSV report");
  ric->add_option("--seed", ric_args.seed, "seed for sampled mode");
  ric->add_option("--cap", ric_args.cap, "subset enumeration cap");
  ric->add_option("--samples", ric_args.samples,
                  "subset count in sampled mode");

  BoundsArgs bounds_args;
  CLI::App* bounds =
      app.add_subcommand("bounds", "closed-form Gaussian-ensemble bounds");
  bounds->add_option("--ratio", bounds_args.ratio, "aspect ratio p/m")
      ->required();
  bounds->add_option("--r", bounds_args.r, "evaluate rho at this r");
  bounds->add_flag("--rstar", bounds_args.rstar,
                   "report the admissible-ratio threshold r*");
  bounds->add_flag("--jroot", bounds_args.jroot,
                   "report the root of the lower-limit function J");
  bounds->add_flag("--finite", bounds_args.finite,
                   "use the finite-sample variant for r*");
  bounds->add_option("--eps", bounds_args.eps,
                     "slack for the finite-sample variant");
  bounds->add_option("--p", bounds_args.p,
                     "row count, reports the concentration o(1) term");
  bounds->add_option("--curve", bounds_args.curve,
                     "emit a rho curve: rmin rmax npts")
      ->expected(3);
  bounds->add_option("--csv", bounds_args.csv_path, "curve output file");

  CertificateArgs cert_args;
  CLI::App* certificate = app.add_subcommand(
      "certificate", "dual certificate construction and verification");
  certificate->add_option("--matrix", cert_args.matrix_path, "matrix file")
      ->required();
  certificate->add_option("--support", cert_args.support_spec,
                          "support indices, e.g. 2,5,9")
      ->required();
  certificate->add_option("--signs", cert_args.signs_spec,
                          "signs on the support, e.g. +,-,+")
      ->required();
  certificate->add_option("--max-iter", cert_args.max_iter, "iteration cap");
  certificate->add_option("--tol", cert_args.tol,
                          "exceptional-mass stopping tolerance");

  CLI::App* experiment =
      app.add_subcommand("experiment", "Monte Carlo harnesses");
  experiment->require_subcommand(1);

  CurveArgs curve_args;
  CLI::App* curve = experiment->add_subcommand(
      "curve", "success-rate curve over corruption fractions");
  curve->add_option("--m", curve_args.config.m, "codeword length");
  curve->add_option("--oversample", curve_args.config.oversample,
                    "m / n ratio");
  curve->add_option("--fractions", curve_args.fractions_spec,
                    "grid start:step:stop or comma list");
  curve->add_option("--trials", curve_args.config.trials_per_point,
                    "trials per grid point");
  curve->add_option("--seed", curve_args.config.master_seed, "master seed");
  curve->add_option("--success-tol", curve_args.config.success_tolerance,
                    "recovery tolerance");
  curve->add_flag("--resample-A", curve_args.config.resample_coding_matrix,
                  "fresh coding matrix per trial");
  curve->add_option("--error-dist", curve_args.error_dist,
                    "gauss, rademacher, or cauchy")
      ->check(CLI::IsMember({"gauss", "rademacher", "cauchy"}));
  curve->add_option("--csv", curve_args.csv_path, "output file");
  curve->add_flag("--gnuplot", curve_args.gnuplot,
                  "prepend a config header to the output");

  CompressArgs compress_args;
  CLI::App* compress = experiment->add_subcommand(
      "compress", "compressible-signal recovery scaling");
  compress->add_option("--m", compress_args.config.m, "signal length");
  compress->add_option("--s", compress_args.config.s, "decay exponent");
  compress->add_option("--B", compress_args.config.b, "amplitude");
  compress->add_option("--K", compress_args.k_spec,
                       "measurement counts, comma list")
      ->required();
  compress->add_option("--trials", compress_args.config.trials,
                       "trials per K");
  compress->add_option("--seed", compress_args.config.master_seed,
                       "master seed");
  compress->add_option("--csv", compress_args.csv_path, "output file");
  compress->add_flag("--gnuplot", compress_args.gnuplot,
                     "prepend a config header to the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(decode)) {
      return cmd_decode(decode_args);
    }
    if (app.got_subcommand(ric)) {
      return cmd_ric(ric_args);
    }
    if (app.got_subcommand(bounds)) {
      return cmd_bounds(bounds_args);
    }
    if (app.got_subcommand(certificate)) {
      return cmd_certificate(cert_args);
    }
    if (app.got_subcommand(experiment)) {
      if (experiment->got_subcommand(curve)) {
        return cmd_experiment_curve(curve_args);
      }
      return cmd_experiment_compress(compress_args);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
