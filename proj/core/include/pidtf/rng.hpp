#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace pidtf {

/// Every randomized operation in the library draws from std::mt19937_64 via
/// the helpers below. The standard pins the mt19937_64 output sequence, and
/// the helpers avoid std::uniform_*_distribution (whose output is
/// implementation-defined), so a seed reproduces the same stream on any
/// platform with IEEE-754 doubles.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Unbiased-enough bounded draw in [0, n) via 128-bit multiply-shift.
inline std::uint64_t draw_below(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

/// Fisher-Yates shuffle, iterating from the back.
template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[draw_below(rng, i)]);
  }
}

/// Gaussian variate via Box-Muller (one variate per call).
inline double gaussian(Rng& rng, double mean, double sd) {
  const double u1 = 1.0 - uniform_unit(rng);  // (0, 1], keeps log finite
  const double u2 = uniform_unit(rng);
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace pidtf
