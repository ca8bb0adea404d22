#pragma once

#include <cstdint>

namespace drumscope::rng {

/// splitmix64. Reference stream for seed 0:
///   0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F
/// (asserted in tests; documented in the README for cross-language reruns).
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0, 1); one draw per call.
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }
};

/// Inverse CDF of the standard normal, Acklam's rational approximation
/// (relative error < 1.2e-9). p must lie in (0, 1).
double normal_inv_cdf(double p);

}  // namespace drumscope::rng
