#pragma once

#include <cstdint>

namespace riskpde {

/// SplitMix64 generator. Chosen over <random> engines because the outputs
/// must be bit-identical across platforms and standard library versions;
/// statistical quality beyond that is not a concern at desk scale.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  /// Decorrelated stream for (seed, index), e.g. one per Monte Carlo sample.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.next();
    return g;
  }

private:
  std::uint64_t state_;
};

} // namespace riskpde
