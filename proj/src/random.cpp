#include "rbte/random.hpp"

namespace rbte {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  const double u = uniform01();
  if (lo == hi) return lo;
  return lo + (hi - lo) * u;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n <= 1) {
    engine_();  // keep the stream length independent of n
    return 0;
  }
  // Values below 2^64 mod n would bias the low residues.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view id,
                          std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(id));
  h = splitmix64(h ^ index);
  return h;
}

}  // namespace rbte
