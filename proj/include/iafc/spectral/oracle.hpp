// oracle.hpp
// ----------
// Independent time-domain solver for the same linear medium, used to
// cross-check the spectral propagator.  Each tooth carries a coherence P_n
// obeying
//
//     ∂_τ P_n = −(iΔ_n + γ_n/2) P_n + w_n E,     ∂_z E = −Σ_n P_n ,
//
// whose Fourier transform reproduces ∂_z Ẽ = −𝒟(ω) Ẽ.  The τ integration is
// exact for piecewise-linear E (exponential integrator); z is advanced with
// classical RK4.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/spectral/pulse.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace iafc {

struct OracleSettings {
  int z_steps = 0;                 // 0: choose from max|𝒟| so that dz·|𝒟| ≤ 0.05
  double growth_tolerance = 1e-6;  // relative energy growth treated as unstable
};

namespace detail {

/// P = Σ_n P_n[E] for one z slice.
inline void coherence_sum(const FrequencyComb& comb, double dt,
                          const std::vector<cdouble>& e, std::vector<cdouble>& out) {
  std::fill(out.begin(), out.end(), cdouble{0.0, 0.0});
  for (const auto& tooth : comb.teeth()) {
    if (tooth.weight == 0.0) continue;
    const cdouble a(0.5 * tooth.linewidth, tooth.detuning);
    const cdouble x = a * dt;
    const cdouble decay = std::exp(-x);
    cdouble c1, c2; // weights of E_k and (E_{k+1} − E_k)
    if (std::abs(x) < 1e-4) {
      c1 = dt * (1.0 - x / 2.0 + x * x / 6.0);
      c2 = dt * (0.5 - x / 6.0 + x * x / 24.0);
    } else {
      c1 = (1.0 - decay) / a;
      c2 = (x - 1.0 + decay) / (a * x);
    }
    c1 *= tooth.weight;
    c2 *= tooth.weight;
    cdouble p{0.0, 0.0};
    out[0] += p;
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      p = decay * p + c1 * e[k] + c2 * (e[k + 1] - e[k]);
      out[k + 1] += p;
    }
  }
}

} // namespace detail

inline TemporalPulse time_domain_oracle(const TemporalPulse& in,
                                        const MediumSpec& medium,
                                        const OracleSettings& settings = {}) {
  medium.validate();
  require(in.size() >= 2 && in.dt > 0.0, "oracle needs a sampled input pulse");
  int nz = settings.z_steps;
  if (nz <= 0) {
    double dmax = 0.0;
    for (const auto& t : medium.comb.teeth()) dmax += 2.0 * t.weight / t.linewidth;
    nz = std::max(1, static_cast<int>(std::ceil(dmax * medium.length / 0.05)));
  }
  const double dz = medium.length / nz;
  const std::size_t n = in.size();
  std::vector<cdouble> e = in.samples, k1(n), k2(n), k3(n), k4(n), tmp(n);
  const auto& comb = medium.comb;
  for (int s = 0; s < nz; ++s) {
    detail::coherence_sum(comb, in.dt, e, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = e[i] - 0.5 * dz * k1[i];
    detail::coherence_sum(comb, in.dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = e[i] - 0.5 * dz * k2[i];
    detail::coherence_sum(comb, in.dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = e[i] - dz * k3[i];
    detail::coherence_sum(comb, in.dt, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      e[i] -= dz / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  TemporalPulse out{in.t0, in.dt, std::move(e)};
  for (const auto& z : out.samples)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericalInstability("time-domain oracle produced non-finite values");
  const double ein = energy(in);
  if (energy(out) > ein * (1.0 + settings.growth_tolerance))
    throw NumericalInstability("time-domain oracle: energy grew in a passive medium");
  return out;
}

} // namespace iafc
