#pragma once

#include <array>
#include <cstdint>

namespace l1codec {

// Fixed-algorithm seedable generator: xoshiro256++ state advanced from a
// 64-bit seed through splitmix64, normal variates via Box-Muller over the
// 53-bit uniform stream. The integer and uniform streams are bit-identical
// across platforms for a fixed seed; normal variates additionally depend on
// the platform's log/cos/sin rounding and are bit-reproducible per build.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Unbiased uniform integer in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal. Pairs are generated lazily; the spare is cached.
  double normal();
  double normal(double mean, double stddev);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// splitmix64 step on an evolving state; used for seeding and seed-splitting.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Fixed hash of (master seed, index) giving independent child seeds, the
// contract parallel trial runners rely on for order-independent streams.
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace l1codec
