#pragma once

#include <cmath>
#include <cstdint>

#include "confbias/special.hpp"

namespace confbias {

/// SplitMix64 generator (Steele, Lea & Flood 2014; Vigna's fixed-increment
/// form).  Counter-based state makes substreams cheap and order-insensitive.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1): ((z >> 11) + 0.5) * 2^-53.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// N[0, 1] by inverse-cdf of a single uniform, so streams are reproducible
  /// without rejection steps.
  double normal() { return norm_ppf(uniform01()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Gamma(shape, 1) via Marsaglia-Tsang, with the standard shape < 1 boost.
  double gamma(double shape) {
    if (!(shape > 0)) throw DomainError("gamma: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0) continue;
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double ga = gamma(a);
    const double gb = gamma(b);
    return ga / (ga + gb);
  }

 private:
  std::uint64_t state_;
};

/// Documented substream rule: stream i of a master seed starts from
/// mix(mix(seed) ^ (0x9E3779B97F4A7C15 * (i + 1))).
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t i) {
  return SplitMix64(
      SplitMix64::mix(SplitMix64::mix(seed) ^ (0x9E3779B97F4A7C15ULL * (i + 1))));
}

}  // namespace confbias
