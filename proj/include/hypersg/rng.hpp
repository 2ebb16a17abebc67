#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hypersg {

/// splitmix64 finalizer; used to derive independent stream seeds from a base
/// seed without correlated low bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded draw stream. The engine is std::mt19937_64, whose output sequence is
/// pinned by the standard, and the uniform mapping is done by hand because the
/// std distributions are not bit-stable across implementations. One stream per
/// tensor keeps generated instances reproducible when ranges are overridden.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(mix64(seed ^ mix64(stream ^ 0xa0761d6478bd642fULL))) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n), n > 0. Fixed-point multiply keeps it portable.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  /// Standard normal via Box-Muller on two explicit uniforms.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypersg
