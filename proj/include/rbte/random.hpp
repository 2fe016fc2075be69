#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rbte {

/// Seeded generator owned by a single sample. Distributions are implemented
/// here rather than taken from <random> so draws are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01();
  /// Uniform in [lo,hi); returns lo exactly when lo == hi.
  double uniform(double lo, double hi);
  /// Uniform integer in [0,n), n >= 1, unbiased (rejection sampling).
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Per-sample seed: a function of (global seed, image id, draw index) only,
/// so outputs do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id,
                          std::uint64_t index);

}  // namespace rbte
