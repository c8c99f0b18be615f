#pragma once

#include <cstdint>
#include <random>

namespace ogrp {

/// Seedable, splittable random source. The engine is mt19937_64 (fully
/// specified by the standard), and all derived draws below are implemented
/// by hand so that sequences are identical across platforms and compilers.
/// Child streams are derived with a splitmix64 hash of (seed, stream index),
/// so parallel tasks can own independent streams from one experiment seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static constexpr const char* name() { return "mt19937_64/splitmix64"; }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    // Largest multiple of bound that fits in 64 bits.
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  /// Direct engine access for stdlib distributions (binomial draws in the
  /// high-shot sampling path).
  std::mt19937_64& engine() { return engine_; }

  /// Independent child stream; deterministic in (seed, stream).
  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x9E3779B97F4A7C15ull)));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace ogrp
