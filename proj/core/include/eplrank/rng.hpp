#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace eplrank {

/// SplitMix64 finalizer. Used for seed derivation and hashing.
std::uint64_t mix64(std::uint64_t x);

/// Derives a stream seed from (master, index, tag). Replicate-level work
/// gets an independent, reproducible stream regardless of worker count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::string_view tag);

/// Seeded random source with explicitly specified draw algorithms, so the
/// same seed produces the same stream on every platform and standard
/// library. std::mt19937_64 output is mandated by the standard; the
/// distribution transforms below are pinned here instead of relying on
/// implementation-defined std::*_distribution behavior.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform double in (0, 1); exact zeros are redrawn.
  double uniform_open01() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    return u;
  }

  /// Uniform integer in [lo, hi], inclusive, via rejection (unbiased).
  int uniform_int(int lo, int hi);

  /// Standard normal via the Marsaglia polar method (spare cached).
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      const int j = uniform_int(0, i);
      std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace eplrank
