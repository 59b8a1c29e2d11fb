// support.hpp
// -----------
// Small helpers shared by the unit tests.
#pragma once

#include "iafc/spectral/pulse.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace iafc::test {

/// ‖a − b‖₂ / ‖b‖₂
inline double rel_l2(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

/// Deterministic generator for property tests.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240601);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

} // namespace iafc::test
