#pragma once

#include <cstdint>
#include <random>

namespace coalesce {

// Recorded in every experiment output so results can be reproduced later.
inline constexpr const char* kGeneratorId = "mt19937_64/splitmix64-derive-v1";

inline constexpr std::uint64_t kDefaultSeed = 987654321;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of replicate `index` under `master`:
//   splitmix64(splitmix64(master) + (index + 1) * 0x9E3779B97F4A7C15).
// splitmix64 is a bijection and the multiplier is odd, so distinct indices
// give distinct seeds for a fixed master.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Thin wrapper over std::mt19937_64. The variate conversions are written out
// here rather than taken from <random> distributions, whose algorithms are
// implementation-defined; this keeps streams identical across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound > 0. Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound);

  // Exponential with rate 1.
  double exponential();

  bool bernoulli(double p) { return uniform01() < p; }

  // Number of failures before the first success of a Bernoulli(p) sequence.
  // Saturates at UINT64_MAX for p == 0.
  std::uint64_t geometric_skip(double p);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

inline Rng derive_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

}  // namespace coalesce
