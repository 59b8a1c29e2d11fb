// echo.hpp
// --------
// Echo location and storage figures of merit.
//
// The first echo of a comb with effective spacing Δ_eff appears near
// T = 2π/Δ_eff.  Efficiency is the output energy in the window
// [T/2, 3T/2] divided by the input energy.  Fidelity is the normalized
// overlap of the echo with the input delayed by T,
//
//     F = |∫_win E_in*(t − T) E_out(t) dt|² / (∫|E_in|² dt · ∫_win |E_out|² dt),
//
// summed over field components for vector fields.  Both the echo time and
// therefore Δ_eff come from the measured echo peak.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/units.hpp"
#include "iafc/spectral/pulse.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace iafc {

struct EchoSearch {
  double lo = 0.5;            // search from lo·2π/Δ_nominal ...
  double hi = 1.5;            // ... to hi·2π/Δ_nominal
  double noise_floor = 1e-12; // peak must exceed this fraction of the trace maximum
};

struct EchoPeak {
  double time = 0.0;
  double intensity = 0.0;
};

struct EchoWindow {
  double t1 = 0.0;
  double t2 = 0.0;
};

/// Figures of merit of one storage run.
struct MemoryReport {
  double echo_time = 0.0;  // s, measured (or nominal if no echo was found)
  double efficiency = 0.0; // η
  double fidelity = 0.0;   // F
  PulseParams input{};     // pulse that produced the report
  double weight_scale = 1.0;
  bool echo_found = false;
};

inline EchoWindow echo_window(double delta_eff) {
  require(delta_eff > 0.0 && std::isfinite(delta_eff),
          "effective spacing must be > 0");
  return {pi / delta_eff, 3.0 * pi / delta_eff};
}

/// Locate the first echo: the interior intensity maximum in the search window,
/// refined to sub-sample precision by a parabola through the three samples
/// around the maximum.  Returns nullopt when the maximum sits on the window
/// edge (a tail, not a peak) or is below the noise floor.
inline std::optional<EchoPeak> find_echo(std::span<const TemporalPulse> components,
                                         double delta_nominal,
                                         const EchoSearch& search = {}) {
  require(!components.empty(), "find_echo needs at least one field component");
  require(delta_nominal > 0.0 && std::isfinite(delta_nominal),
          "nominal spacing must be > 0");
  require(search.hi > search.lo && search.lo > 0.0, "empty echo search window");
  const auto& g0 = components.front();
  const std::size_t n = g0.size();
  std::vector<double> inten(n, 0.0);
  for (const auto& c : components) {
    require(c.size() == n && c.dt == g0.dt && c.t0 == g0.t0,
            "field components must share one grid");
    for (std::size_t k = 0; k < n; ++k) inten[k] += std::norm(c.samples[k]);
  }
  const double period = two_pi / delta_nominal;
  const double ta = search.lo * period, tb = search.hi * period;
  const double ka = std::ceil((ta - g0.t0) / g0.dt);
  const double kb = std::floor((tb - g0.t0) / g0.dt);
  require(ka >= 0.0 && kb <= static_cast<double>(n - 1) && kb - ka >= 2.0,
          "echo search window is empty or outside the time grid");
  const auto k_lo = static_cast<std::size_t>(ka), k_hi = static_cast<std::size_t>(kb);
  std::size_t kmax = k_lo;
  for (std::size_t k = k_lo; k <= k_hi; ++k)
    if (inten[k] > inten[kmax]) kmax = k;
  if (kmax == k_lo || kmax == k_hi) return std::nullopt;
  double global = 0.0;
  for (double v : inten) global = std::max(global, v);
  if (global == 0.0 || inten[kmax] < search.noise_floor * global) return std::nullopt;
  const double ym = inten[kmax - 1], y0 = inten[kmax], yp = inten[kmax + 1];
  const double denom = ym - 2.0 * y0 + yp;
  double off = denom < 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
  off = std::clamp(off, -0.5, 0.5);
  return EchoPeak{g0.time(kmax) + off * g0.dt,
                  y0 - 0.25 * (ym - yp) * off};
}

inline std::optional<EchoPeak> find_echo(const TemporalPulse& out, double delta_nominal,
                                         const EchoSearch& search = {}) {
  return find_echo(std::span<const TemporalPulse>(&out, 1), delta_nominal, search);
}

/// Band-limited evaluation of `p` at the sample times of `target`, delayed by
/// `delay`: returns p(t − delay).  Uses an FFT phase shift when the grids
/// coincide and a direct Fourier sum otherwise.
inline TemporalPulse delayed_on_grid(const TemporalPulse& p, double delay,
                                     const TimeGrid& target) {
  const auto fg = reciprocal_frequency_grid(p.grid());
  FourierPair fp(p.grid(), fg);
  SpectralPulse s = fp.to_freq(p);
  const auto ramp = phase_ramp(-fg.omega0 * delay, -fg.domega * delay, s.size());
  for (std::size_t j = 0; j < s.size(); ++j) s.samples[j] *= ramp[j];
  const auto pg = p.grid();
  if (target.n == pg.n && target.dt == pg.dt && target.t0 == pg.t0)
    return fp.to_time(s);
  TemporalPulse out{target.t0, target.dt, std::vector<cdouble>(target.n)};
  for (std::size_t k = 0; k < target.n; ++k) {
    const double t = target.time(k);
    const auto r = phase_ramp(fg.omega0 * t, fg.domega * t, s.size());
    cdouble acc{0.0, 0.0};
    for (std::size_t j = 0; j < s.size(); ++j) acc += s.samples[j] * r[j];
    out.samples[k] = acc * fg.domega / two_pi;
  }
  return out;
}

inline double echo_efficiency(std::span<const TemporalPulse> in,
                              std::span<const TemporalPulse> out, double delta_eff) {
  require(in.size() == out.size() && !in.empty(), "component count mismatch");
  const auto w = echo_window(delta_eff);
  double ein = 0.0, eout = 0.0;
  for (std::size_t c = 0; c < in.size(); ++c) {
    ein += energy(in[c]);
    eout += window_energy(out[c], w.t1, w.t2);
  }
  require(ein > 0.0, "input pulse has zero energy");
  return eout / ein;
}

inline double echo_fidelity(std::span<const TemporalPulse> in,
                            std::span<const TemporalPulse> out, double delta_eff) {
  require(in.size() == out.size() && !in.empty(), "component count mismatch");
  const auto w = echo_window(delta_eff);
  const double T = two_pi / delta_eff;
  double ein = 0.0, eout = 0.0;
  cdouble ov{0.0, 0.0};
  for (std::size_t c = 0; c < in.size(); ++c) {
    ein += energy(in[c]);
    eout += window_energy(out[c], w.t1, w.t2);
    const auto shifted = delayed_on_grid(in[c], T, out[c].grid());
    ov += window_overlap(shifted, out[c], w.t1, w.t2);
  }
  require(ein > 0.0, "input pulse has zero energy");
  if (!(eout > 0.0))
    throw UndefinedFidelity("no output energy in the echo window");
  return std::norm(ov) / (ein * eout);
}

inline double echo_efficiency(const TemporalPulse& in, const TemporalPulse& out,
                              double delta_eff) {
  return echo_efficiency(std::span(&in, 1), std::span(&out, 1), delta_eff);
}

inline double scalar_fidelity(const TemporalPulse& in, const TemporalPulse& out,
                              double delta_eff) {
  return echo_fidelity(std::span(&in, 1), std::span(&out, 1), delta_eff);
}

} // namespace iafc

namespace iafc {

/// Full analysis of one storage run: locate the echo (falling back to the
/// nominal spacing when there is none), then evaluate η and F with
/// Δ_eff = 2π / t_echo.  When the echo window holds no energy the fidelity is
/// reported as NaN rather than thrown, so that sweeps can continue.
inline MemoryReport analyze_storage(std::span<const TemporalPulse> in,
                                    std::span<const TemporalPulse> out,
                                    double delta_nominal,
                                    const EchoSearch& search = {}) {
  MemoryReport r;
  const auto peak = find_echo(out, delta_nominal, search);
  r.echo_found = peak.has_value();
  r.echo_time = peak ? peak->time : two_pi / delta_nominal;
  const double delta_eff = two_pi / r.echo_time;
  r.efficiency = echo_efficiency(in, out, delta_eff);
  try {
    r.fidelity = echo_fidelity(in, out, delta_eff);
  } catch (const UndefinedFidelity&) {
    r.fidelity = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

} // namespace iafc
