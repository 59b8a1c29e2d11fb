// pulse.hpp
// ---------
// Sampled temporal and spectral field envelopes and the continuous-Fourier
// convention connecting them:
//
//     Ẽ(ω) = ∫ E(t) e^{−iωt} dt,        E(t) = (1/2π) ∫ Ẽ(ω) e^{iωt} dω.
//
// On reciprocal grids both transforms reduce to a DFT bracketed by phase
// ramps; Parseval then holds exactly:  Σ|E|² dt = (1/2π) Σ|Ẽ|² dω.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/fft.hpp"
#include "iafc/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace iafc {

using cdouble = std::complex<double>;

struct TemporalPulse {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<cdouble> samples;

  TimeGrid grid() const { return {t0, dt, samples.size()}; }
  std::size_t size() const { return samples.size(); }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

struct SpectralPulse {
  double omega0 = 0.0;
  double domega = 0.0;
  std::vector<cdouble> samples;

  FrequencyGrid grid() const { return {omega0, domega, samples.size()}; }
  std::size_t size() const { return samples.size(); }
  double omega(std::size_t j) const {
    return omega0 + static_cast<double>(j) * domega;
  }
};

/// Gaussian input spectrum exp(−(ω−μ)²/(2b²)).
struct PulseParams {
  double width = 0.0;       // b, rad/s
  double mean_offset = 0.0; // μ, rad/s
};

/// e^{i(a + b k)} for k = 0..n−1.  Exact phases are recomputed every 64
/// samples so rounding does not accumulate over long ramps.
inline std::vector<cdouble> phase_ramp(double a, double b, std::size_t n) {
  std::vector<cdouble> r(n);
  const cdouble step = std::polar(1.0, b);
  for (std::size_t k0 = 0; k0 < n; k0 += 64) {
    cdouble z = std::polar(1.0, a + b * static_cast<double>(k0));
    const std::size_t k1 = std::min(n, k0 + 64);
    for (std::size_t k = k0; k < k1; ++k) {
      r[k] = z;
      z *= step;
    }
  }
  return r;
}

/// Precomputed transform between one time grid and its reciprocal frequency
/// grid.  Reusing a FourierPair avoids recomputing the phase ramps.
class FourierPair {
 public:
  FourierPair(const TimeGrid& tg, const FrequencyGrid& fg) : tg_(tg), fg_(fg) {
    require_reciprocal(tg, fg);
    const std::size_t n = tg.n;
    // to_freq:  Ẽ_j = dt e^{−iω_j t0} Σ_k E_k e^{−iω0 k dt} e^{−2πi jk/N}
    fwd_pre_ = phase_ramp(0.0, -fg.omega0 * tg.dt, n);
    fwd_post_ = phase_ramp(-fg.omega0 * tg.t0, -fg.domega * tg.t0, n);
    for (auto& z : fwd_post_) z *= tg.dt;
    // to_time:  E_k = (dω/2π) e^{iω0 t_k} Σ_j Ẽ_j e^{i j dω t0} e^{2πi jk/N}
    bwd_pre_ = phase_ramp(0.0, fg.domega * tg.t0, n);
    bwd_post_ = phase_ramp(fg.omega0 * tg.t0, fg.omega0 * tg.dt, n);
    for (auto& z : bwd_post_) z *= fg.domega / two_pi;
  }

  const TimeGrid& time_grid() const { return tg_; }
  const FrequencyGrid& frequency_grid() const { return fg_; }

  /// In-place: time samples -> spectral samples.
  void forward(std::span<cdouble> data) const {
    require(data.size() == tg_.n, "FourierPair: buffer size mismatch");
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= fwd_pre_[k];
    fft::transform(data, fft::Direction::forward);
    for (std::size_t j = 0; j < data.size(); ++j) data[j] *= fwd_post_[j];
  }

  /// In-place: spectral samples -> time samples.
  void backward(std::span<cdouble> data) const {
    require(data.size() == fg_.n, "FourierPair: buffer size mismatch");
    for (std::size_t j = 0; j < data.size(); ++j) data[j] *= bwd_pre_[j];
    fft::transform(data, fft::Direction::backward);
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= bwd_post_[k];
  }

  SpectralPulse to_freq(const TemporalPulse& p) const {
    SpectralPulse s{fg_.omega0, fg_.domega, p.samples};
    forward(s.samples);
    return s;
  }

  TemporalPulse to_time(const SpectralPulse& s) const {
    TemporalPulse p{tg_.t0, tg_.dt, s.samples};
    backward(p.samples);
    return p;
  }

 private:
  TimeGrid tg_;
  FrequencyGrid fg_;
  std::vector<cdouble> fwd_pre_, fwd_post_, bwd_pre_, bwd_post_;
};

inline SpectralPulse to_freq(const TemporalPulse& p, const FrequencyGrid& fg) {
  return FourierPair(p.grid(), fg).to_freq(p);
}

inline TemporalPulse to_time(const SpectralPulse& s, const TimeGrid& tg) {
  return FourierPair(tg, s.grid()).to_time(s);
}

/// Gaussian spectrum on `fg`.  Samples below 1e-300 are flushed to zero.
inline SpectralPulse gaussian_spectrum(const FrequencyGrid& fg,
                                       const PulseParams& p) {
  require(p.width > 0.0 && std::isfinite(p.width), "pulse width must be > 0");
  require(std::isfinite(p.mean_offset), "pulse mean offset must be finite");
  SpectralPulse s{fg.omega0, fg.domega, std::vector<cdouble>(fg.n)};
  const double inv = 1.0 / (2.0 * p.width * p.width);
  for (std::size_t j = 0; j < fg.n; ++j) {
    const double x = fg.omega(j) - p.mean_offset;
    const double arg = x * x * inv;
    s.samples[j] = arg < 690.0 ? std::exp(-arg) : 0.0;
  }
  return s;
}

/// Analytic time-domain counterpart of gaussian_spectrum (centred at t = 0).
inline cdouble gaussian_time_envelope(const PulseParams& p, double t) {
  const double b = p.width;
  return b / std::sqrt(two_pi) * std::exp(-0.5 * b * b * t * t) *
         std::polar(1.0, p.mean_offset * t);
}

inline double energy(const TemporalPulse& p) {
  double s = 0.0;
  for (const auto& z : p.samples) s += std::norm(z);
  return s * p.dt;
}

inline double energy(const SpectralPulse& p) {
  double s = 0.0;
  for (const auto& z : p.samples) s += std::norm(z);
  return s * p.domega / two_pi;
}

// ---------------------------------------------------------------------------
// Window integration.  Integrals over [t1, t2] use the trapezoid rule with the
// two edge cells cut at the window boundary (the integrand is linearly
// interpolated inside the cut cells), so the result is continuous in t1, t2.
// ---------------------------------------------------------------------------
struct WindowWeights {
  std::size_t first = 0;       // index of weights[0]
  std::vector<double> weights; // quadrature weight per sample
};

inline WindowWeights window_weights(const TimeGrid& g, double t1, double t2) {
  require(std::isfinite(t1) && std::isfinite(t2) && t2 > t1,
          "integration window must satisfy t1 < t2");
  require(g.n >= 2, "window integration needs at least two samples");
  const double tlast = g.time(g.n - 1);
  require(t1 >= g.t0 && t2 <= tlast, "integration window lies outside the grid");
  const double u1 = (t1 - g.t0) / g.dt;
  const double u2 = (t2 - g.t0) / g.dt;
  auto k1 = static_cast<std::size_t>(std::floor(u1));
  auto k2 = static_cast<std::size_t>(std::floor(u2));
  k1 = std::min(k1, g.n - 2);
  k2 = std::min(k2, g.n - 2);
  WindowWeights w;
  w.first = k1;
  w.weights.assign(k2 - k1 + 2, 0.0);
  for (std::size_t k = k1; k <= k2; ++k) {
    // cell [k, k+1] in index units, clipped to [u1, u2]
    const double a = std::max(u1, static_cast<double>(k)) - static_cast<double>(k);
    const double b = std::min(u2, static_cast<double>(k + 1)) - static_cast<double>(k);
    if (b <= a) continue;
    // ∫_a^b [(1−s) g_k + s g_{k+1}] ds
    const double wk1 = 0.5 * (b * b - a * a);
    const double wk = (b - a) - wk1;
    w.weights[k - k1] += wk * g.dt;
    w.weights[k - k1 + 1] += wk1 * g.dt;
  }
  return w;
}

inline double window_energy(const TemporalPulse& p, double t1, double t2) {
  const auto w = window_weights(p.grid(), t1, t2);
  double s = 0.0;
  for (std::size_t i = 0; i < w.weights.size(); ++i)
    s += w.weights[i] * std::norm(p.samples[w.first + i]);
  return s;
}

/// ∫_{t1}^{t2} conj(a(t)) b(t) dt for pulses on the same grid.
inline cdouble window_overlap(const TemporalPulse& a, const TemporalPulse& b,
                              double t1, double t2) {
  require(a.size() == b.size() && a.dt == b.dt && a.t0 == b.t0,
          "window overlap needs pulses on the same grid");
  const auto w = window_weights(a.grid(), t1, t2);
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < w.weights.size(); ++i)
    s += w.weights[i] * std::conj(a.samples[w.first + i]) * b.samples[w.first + i];
  return s;
}

} // namespace iafc
