// grid.hpp
// --------
// Uniform time/frequency grids and the policy that sizes them.  A time grid
// (t0, dt, N) and a frequency grid (ω0, dω, N) are reciprocal when
// N·dt·dω = 2π; only reciprocal pairs can be exchanged by a DFT.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace iafc {

struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t n = 0;

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double duration() const { return static_cast<double>(n) * dt; }
};

struct FrequencyGrid {
  double omega0 = 0.0;
  double domega = 0.0;
  std::size_t n = 0;

  double omega(std::size_t j) const {
    return omega0 + static_cast<double>(j) * domega;
  }
  double span() const { return static_cast<double>(n) * domega; }
  double omega_max() const { return omega(n - 1); }
  bool contains(double w) const { return w >= omega0 && w <= omega_max(); }
};

inline constexpr double reciprocity_tolerance = 1e-9;

inline bool reciprocal(const TimeGrid& tg, const FrequencyGrid& fg) {
  if (tg.n != fg.n || tg.n == 0) return false;
  const double prod = static_cast<double>(tg.n) * tg.dt * fg.domega;
  return std::abs(prod - two_pi) <= reciprocity_tolerance * two_pi;
}

inline void require_reciprocal(const TimeGrid& tg, const FrequencyGrid& fg) {
  require(tg.n == fg.n, "grid sizes differ: time N=" + std::to_string(tg.n) +
                            ", frequency N=" + std::to_string(fg.n));
  require(tg.dt > 0.0 && fg.domega > 0.0, "grid steps must be positive");
  require(reciprocal(tg, fg), "time and frequency grids are not reciprocal "
                              "(N·dt·dω must equal 2π)");
}

/// Time grid reciprocal to `fg`, with t = 0 at sample n/2.
inline TimeGrid reciprocal_time_grid(const FrequencyGrid& fg) {
  require(fg.n > 0 && fg.domega > 0.0, "empty frequency grid");
  TimeGrid tg;
  tg.n = fg.n;
  tg.dt = two_pi / (static_cast<double>(fg.n) * fg.domega);
  tg.t0 = -static_cast<double>(fg.n / 2) * tg.dt;
  return tg;
}

/// Frequency grid reciprocal to `tg`, centred (sample n/2) on `center`.
inline FrequencyGrid reciprocal_frequency_grid(const TimeGrid& tg,
                                               double center = 0.0) {
  require(tg.n > 0 && tg.dt > 0.0, "empty time grid");
  FrequencyGrid fg;
  fg.n = tg.n;
  fg.domega = two_pi / (static_cast<double>(tg.n) * tg.dt);
  fg.omega0 = center - static_cast<double>(tg.n / 2) * fg.domega;
  return fg;
}

/// Smallest n' ≥ n whose only prime factors are 2, 3, 5, 7 (FFT friendly).
inline std::size_t next_fast_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

// ---------------------------------------------------------------------------
// Grid policy.  The spectral window spans span_factor × max(comb span,
// width_factor × pulse width) and resolves the narrowest tooth with at least
// `points_per_linewidth` samples per γ.
// ---------------------------------------------------------------------------
struct GridPolicy {
  double span_factor = 4.0;
  double width_factor = 6.0;
  double points_per_linewidth = 6.0;
};

struct GridRequest {
  double center = 0.0;         // rad/s, centre of the spectral window
  double comb_span = 0.0;      // rad/s, max minus min tooth position
  double pulse_width = 0.0;    // rad/s, largest pulse width b to be used
  double min_linewidth = 0.0;  // rad/s, narrowest γ present
};

inline FrequencyGrid make_spectral_grid(const GridRequest& req,
                                        const GridPolicy& policy = {}) {
  require(req.min_linewidth > 0.0, "grid policy needs a positive linewidth");
  require(req.comb_span >= 0.0 && req.pulse_width >= 0.0,
          "grid policy spans must be non-negative");
  const double span = policy.span_factor *
                      std::max(req.comb_span, policy.width_factor * req.pulse_width);
  require(span > 0.0, "grid policy: zero spectral span");
  const double max_step = req.min_linewidth / policy.points_per_linewidth;
  const auto n = next_fast_size(
      static_cast<std::size_t>(std::ceil(span / max_step)));
  FrequencyGrid fg;
  fg.n = n;
  fg.domega = span / static_cast<double>(n);
  fg.omega0 = req.center - static_cast<double>(n / 2) * fg.domega;
  return fg;
}

} // namespace iafc
