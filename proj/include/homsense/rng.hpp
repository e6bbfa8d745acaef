#pragma once

// Deterministic random number generation.
//
// std::mt19937_64 supplies the bit stream; uniform and normal variates are
// derived by fixed arithmetic (53-bit shift and Box-Muller) instead of the
// standard-library distributions, whose output differs across toolchains.
// Substream seeds are derived with a splitmix64 finalizer so parallel trials
// are reproducible regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "homsense/common.hpp"

namespace homsense {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed for the `stream`-th substream of a master seed. Distinct streams give
// statistically independent generators.
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream) {
  return splitmix64(master_seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the paired variate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double r = std::sqrt(-2.0 * std::log(u));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Vec3 normal3() { return Vec3(normal(), normal(), normal()); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace homsense
