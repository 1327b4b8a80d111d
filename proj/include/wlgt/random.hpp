#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace wlgt {

/// SplitMix64 finalizer. Used to derive stateless, keyed pseudo-random values
/// so that parameter tables are reproducible entry by entry.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double unit_uniform(std::uint64_t key) {
  return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

/// Standard normal sample keyed by `key` (Box-Muller).
double keyed_gaussian(std::uint64_t key);

/// Thin wrapper over mt19937_64 with distribution code written out by hand, so
/// that sequences do not depend on the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniformly random permutation of [0, n) (Fisher-Yates).
  std::vector<int> permutation(int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace wlgt
