#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace minrisk {

/// SplitMix64 finalizer. Used to turn (seed, trial, stream) tuples into
/// decorrelated engine seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed-splitting rule shared by the serial and parallel execution paths:
/// mix the master seed, XOR in the trial index, mix, XOR in the stream tag,
/// mix again. Trial streams are therefore identical no matter how trials are
/// scheduled across workers.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t trial,
                                           std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ stream);
}

/// Deterministic random stream. The core engine is mt19937_64 (bit-stable by
/// the standard); the draw-to-double conventions are fixed here rather than
/// delegated to std:: distributions, whose output differs across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller, one spare value cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - u lies in (0, 1], keeping the log argument away from zero.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

  /// +1 or -1 with equal probability.
  double rademacher() { return uniform01() < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace minrisk
