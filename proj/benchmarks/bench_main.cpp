#include <benchmark/benchmark.h>

#include "l1codec/decode.hpp"
#include "l1codec/experiments.hpp"
#include "l1codec/rip.hpp"

namespace {

using namespace l1codec;

void BM_DecodeL1(benchmark::State& state) {
  const Index m = state.range(0);
  const Index n = m / 2;
  SeededRng rng(1);
  const Matrix a = sample_gaussian_matrix(m, n, 1.0, rng);
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = rng.normal();
  }
  Vector e = Vector::Zero(m);
  for (Index i = 0; i < m / 10; ++i) {
    e(static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)))) =
        rng.normal();
  }
  const Vector y = a * x + e;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_l1(a, y));
  }
}
BENCHMARK(BM_DecodeL1)->Arg(64)->Arg(128)->Arg(256)->Arg(512)
    ->Unit(benchmark::kMillisecond);

void BM_BasisPursuit(benchmark::State& state) {
  const Index m = state.range(0);
  const Index p = m / 2;
  SeededRng rng(2);
  const Matrix f =
      sample_gaussian_matrix(p, m, 1.0 / static_cast<double>(p), rng);
  Vector e = Vector::Zero(m);
  e(3) = 1.0;
  e(m / 2) = -2.0;
  const Vector y = f * e;
  for (auto _ : state) {
    benchmark::DoNotOptimize(basis_pursuit(f, y));
  }
}
BENCHMARK(BM_BasisPursuit)->Arg(64)->Arg(128)->Arg(256)->Arg(512)
    ->Unit(benchmark::kMillisecond);

void BM_Annihilator(benchmark::State& state) {
  const Index m = state.range(0);
  SeededRng rng(3);
  const Matrix a = sample_gaussian_matrix(m, m / 2, 1.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(annihilator(a));
  }
}
BENCHMARK(BM_Annihilator)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_DeltaExact(benchmark::State& state) {
  const Index s = state.range(0);
  SeededRng rng(4);
  const Matrix f = sample_gaussian_matrix(16, 32, 1.0 / 16.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_exact(f, s));
  }
}
BENCHMARK(BM_DeltaExact)->Arg(2)->Arg(3)->Arg(4);

void BM_ThetaExact(benchmark::State& state) {
  SeededRng rng(5);
  const Matrix f = sample_gaussian_matrix(16, 20, 1.0 / 16.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta_exact(f, 2, 4));
  }
}
BENCHMARK(BM_ThetaExact)->Unit(benchmark::kMillisecond);

void BM_DualCertificate(benchmark::State& state) {
  SeededRng rng(6);
  const Matrix f = sample_gaussian_matrix(10, 14, 1.0 / 10.0, rng);
  const IndexSet support({3}, 14);
  const Vector signs = Vector::Constant(1, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dual_certificate_linf(f, support, signs));
  }
}
BENCHMARK(BM_DualCertificate);

}  // namespace

BENCHMARK_MAIN();
