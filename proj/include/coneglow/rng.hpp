#pragma once

#include <cstdint>
#include <random>

namespace coneglow {

// Seedable 64-bit generator. Streams for parallel trials are derived as
// Rng(seed + trial_index), so results do not depend on worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }

  // Standard normal via Box-Muller; deterministic across standard libraries.
  double normal();

  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(seed + index); }

 private:
  // splitmix64 finalizer: decorrelates adjacent seeds before seeding the engine.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace coneglow
