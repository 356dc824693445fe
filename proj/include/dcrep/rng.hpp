#pragma once

// The one random source used across the library. Every sampler takes either a
// seed or an Rng by reference; nothing touches ambient randomness.
//
// Streams are derived with SplitMix64 so that split(k) of a given generator is
// a pure function of (seed, k). Parallel callers split by worker index.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dcrep {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
    engine_.seed(seq);
  }

  /// Independent child stream; deterministic in (seed, stream, k).
  [[nodiscard]] Rng split(std::uint64_t k) const {
    std::uint64_t s = seed_ + 0x632BE59BD9B4E019ULL * (stream_ + 1);
    return Rng(splitmix64(s) ^ k, (stream_ << 16) + k + 1);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return normal_(engine_); }

  double exponential() { return -std::log(uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dcrep
