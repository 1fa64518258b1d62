#pragma once

#include <cstdint>
#include <random>

namespace emplan {

struct RngSeed {
  std::uint64_t value = 0;
};

/// Independent streams carved out of one per-run seed.
enum class Stream : std::uint64_t {
  Environment = 1,
  Exploration = 2,
  Features = 3,
  Buffer = 4,
  Model = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic generator. All draws are implemented here on top of the raw
/// 64-bit engine so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng forStream(RngSeed run, Stream stream) {
    return Rng(splitmix64(run.value) ^ splitmix64(static_cast<std::uint64_t>(stream) * 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace emplan
