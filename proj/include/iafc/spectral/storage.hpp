// storage.hpp
// -----------
// Fast evaluator for scalar comb storage with Gaussian input pulses.  The
// medium response L·𝒟(ω) and the Fourier phase ramps are computed once; each
// evaluation then costs two FFTs.  This is the objective behind the pulse
// optimizer and all scalar sweeps.
#pragma once

#include "iafc/core/grid.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/spectral/echo.hpp"
#include "iafc/spectral/propagate.hpp"
#include "iafc/spectral/pulse.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace iafc {

/// Spectral grid sized by `policy` for a comb and the widest pulse to be used.
inline FrequencyGrid grid_for_comb(const FrequencyComb& comb, double max_width,
                                   const GridPolicy& policy = {}) {
  require(!comb.empty(), "grid_for_comb: empty comb");
  return make_spectral_grid(
      {comb.center(), comb.span(), max_width, comb.min_linewidth()}, policy);
}

struct StorageTraces {
  TemporalPulse input;
  TemporalPulse output;
  MemoryReport report;
};

/// Evaluator for Gaussian pulses stored in one scalar comb medium.
///
/// evaluate() is the hot path: the Gaussian, the medium response and the
/// DFT pre-phase are folded into a single complex exponential over the pulse
/// support, one FFT produces the output, and the delayed input needed for the
/// fidelity is evaluated analytically on the echo-window samples only.
/// Scratch storage is reused, so one instance must not be shared between
/// threads.
class ScalarStorage {
 public:
  ScalarStorage(const MediumSpec& medium, const FrequencyGrid& grid,
                double delta_nominal, const EchoSearch& search = {})
      : ScalarStorage(medium_response(medium, grid), grid, delta_nominal, search) {}

  /// Evaluator for an arbitrary medium response: `response[j]` is the
  /// integrated exponent L·𝒟(ω_j), so the output spectrum is
  /// Ẽ_in·e^{−s·response}.
  ScalarStorage(std::vector<cdouble> response, const FrequencyGrid& grid,
                double delta_nominal, const EchoSearch& search = {})
      : fg_(grid),
        tg_(reciprocal_time_grid(grid)),
        delta_nominal_(delta_nominal),
        search_(search),
        lD_(std::move(response)) {
    require(delta_nominal > 0.0, "nominal spacing must be > 0");
    require(lD_.size() == fg_.n, "medium response does not match the grid");
    pre_phase_.resize(fg_.n);
    const double step = fg_.domega * tg_.t0;
    for (std::size_t j = 0; j < fg_.n; ++j)
      pre_phase_[j] = std::remainder(static_cast<double>(j) * step, two_pi);
    scratch_.samples.resize(fg_.n);
    scratch_.t0 = tg_.t0;
    scratch_.dt = tg_.dt;
  }

  /// L·𝒟(ω_j) on the grid, after validating coverage.
  static std::vector<cdouble> medium_response(const MediumSpec& medium,
                                              const FrequencyGrid& grid) {
    medium.validate();
    check_coverage(medium.comb, grid);
    auto lD = transfer_on_grid(medium.comb, grid);
    for (auto& z : lD) z *= medium.length;
    return lD;
  }

  const FrequencyGrid& grid() const { return fg_; }
  const TimeGrid& time_grid() const { return tg_; }
  double delta_nominal() const { return delta_nominal_; }

  MemoryReport evaluate(const PulseParams& p, double weight_scale = 1.0) {
    require(weight_scale >= 0.0 && std::isfinite(weight_scale),
            "weight scale must be >= 0");
    require(p.width > 0.0 && std::isfinite(p.width) && std::isfinite(p.mean_offset),
            "pulse width must be > 0 and offsets finite");
    const double inv = 1.0 / (2.0 * p.width * p.width);
    auto& out = scratch_.samples;
    double ein = 0.0;
    for (std::size_t j = 0; j < fg_.n; ++j) {
      const double x = fg_.omega(j) - p.mean_offset;
      const double arg = x * x * inv;
      if (arg > support_cutoff) {
        out[j] = 0.0;
        continue;
      }
      ein += std::exp(-2.0 * arg);
      const cdouble z(-arg - weight_scale * lD_[j].real(),
                      pre_phase_[j] - weight_scale * lD_[j].imag());
      out[j] = std::exp(z);
    }
    ein *= fg_.domega / two_pi;
    require(ein > 0.0, "input spectrum has no support on the grid");
    fft::transform(out, fft::Direction::backward);
    // Magnitudes are now exact up to dω/2π; the per-sample phase e^{iω0 t_k}
    // is applied below only where the overlap needs it.
    const double scale = fg_.domega / two_pi;
    for (auto& z : out) z *= scale;

    MemoryReport r;
    r.input = p;
    r.weight_scale = weight_scale;
    const auto peak = find_echo(scratch_, delta_nominal_, search_);
    r.echo_found = peak.has_value();
    r.echo_time = peak ? peak->time : two_pi / delta_nominal_;
    const auto win = echo_window(two_pi / r.echo_time);
    const auto w = window_weights(tg_, win.t1, win.t2);
    double eout = 0.0;
    cdouble ov{0.0, 0.0};
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
      const std::size_t k = w.first + i;
      const double t = tg_.time(k);
      const cdouble e = out[k] * std::polar(1.0, fg_.omega0 * t);
      eout += w.weights[i] * std::norm(e);
      ov += w.weights[i] * std::conj(gaussian_time_envelope(p, t - r.echo_time)) * e;
    }
    r.efficiency = eout / ein;
    r.fidelity = eout > 0.0 ? std::norm(ov) / (ein * eout)
                            : std::numeric_limits<double>::quiet_NaN();
    return r;
  }

  /// Full input/output traces (generic transform path) plus the report.
  StorageTraces traces(const PulseParams& p, double weight_scale = 1.0) {
    StorageTraces t;
    t.report = evaluate(p, weight_scale);
    FourierPair fp(tg_, fg_);
    const SpectralPulse spec = gaussian_spectrum(fg_, p);
    t.input = fp.to_time(spec);
    t.output = TemporalPulse{tg_.t0, tg_.dt, spec.samples};
    apply_transfer(t.output.samples, lD_, weight_scale);
    fp.backward(t.output.samples);
    return t;
  }

  /// Output spectrum of a Gaussian input (generic path), for analysis tools.
  SpectralPulse output_spectrum(const PulseParams& p, double weight_scale = 1.0) const {
    SpectralPulse s = gaussian_spectrum(fg_, p);
    apply_transfer(s.samples, lD_, weight_scale);
    return s;
  }

  /// Spectral samples beyond exp(−40) of the peak amplitude are dropped.
  static constexpr double support_cutoff = 40.0;

 private:
  FrequencyGrid fg_;
  TimeGrid tg_;
  double delta_nominal_;
  EchoSearch search_;
  std::vector<cdouble> lD_;
  std::vector<double> pre_phase_;
  TemporalPulse scratch_;
};

} // namespace iafc
