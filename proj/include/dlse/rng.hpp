#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace dlse {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based generator with hashed substream keys. A stream is identified
/// by (seed, id_0, id_1, ...); draws within a stream advance a counter only,
/// so streams never interfere with each other. Adding nodes or steps to a
/// simulation therefore does not perturb existing streams.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    key_ = detail::splitmix64(seed ^ 0x5851f42d4c957f2dULL);
    for (std::uint64_t id : ids) {
      key_ = detail::splitmix64(key_ ^ detail::splitmix64(id));
    }
  }

  std::uint64_t next_u64() { return detail::splitmix64(key_ ^ counter_++); }

  /// Uniform on (0, 1).
  double uniform01() {
    // 53-bit mantissa, offset by half an ulp so 0 is excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  /// Marsaglia-Tsang; requires shape >= 1 (enough for chi-square with
  /// dof > 2, the only use here).
  double gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_square(double dof) { return 2.0 * gamma(dof / 2.0); }

  double student_t(double dof) {
    const double z = normal();
    return z / std::sqrt(chi_square(dof) / dof);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace dlse
