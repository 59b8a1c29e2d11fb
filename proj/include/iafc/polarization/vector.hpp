// vector.hpp
// ----------
// Polarization-resolved propagation, vector fidelity and the dual-comb
// storage evaluator.  Components are (E₊, E₋) on the circular basis
// ê± = (x̂ ± iŷ)/√2; horizontal polarization is (1, 1)/√2.
#pragma once

#include "iafc/core/grid.hpp"
#include "iafc/optimize/optimize.hpp"
#include "iafc/polarization/dual_comb.hpp"
#include "iafc/spectral/echo.hpp"
#include "iafc/spectral/propagate.hpp"
#include "iafc/spectral/storage.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace iafc {

struct VectorPulse {
  SpectralPulse plus;
  SpectralPulse minus;
};

using VectorField = std::array<TemporalPulse, 2>;

/// Input polarization as circular-basis amplitudes (normalized on use).
struct Polarization {
  cdouble plus{1.0 / std::numbers::sqrt2, 0.0};
  cdouble minus{1.0 / std::numbers::sqrt2, 0.0};

  static Polarization horizontal() { return {}; }
  static Polarization right() { return {{1.0, 0.0}, {0.0, 0.0}}; }
  static Polarization left() { return {{0.0, 0.0}, {1.0, 0.0}}; }

  Polarization normalized() const {
    const double n = std::sqrt(std::norm(plus) + std::norm(minus));
    require(n > 0.0, "polarization vector must be nonzero");
    return {plus / n, minus / n};
  }
};

/// Optional compensation applied to the E₋ output before the fidelity:
/// a constant phase and a group delay (a wave plate / delay line).
struct WavePlate {
  double phase = 0.0; // rad
  double delay = 0.0; // s
};

inline VectorPulse propagate_vector(const VectorPulse& v, const DualComb& dc, double length) {
  require(length > 0.0 && std::isfinite(length), "medium length must be > 0");
  const auto g = v.plus.grid();
  const auto gm = v.minus.grid();
  require(g.n == gm.n && g.omega0 == gm.omega0 && g.domega == gm.domega,
          "vector pulse components must share one grid");
  check_coverage(dc.union_comb(), g);
  const auto cp = dc.comb_plus(), cm = dc.comb_minus();
  const auto dp = transfer_on_grid(cp, g), dm = transfer_on_grid(cm, g);
  VectorPulse out = v;
  const bool cross = dc.has_cross();
  for (std::size_t j = 0; j < g.n; ++j) {
    if (!cross) {
      out.plus.samples[j] *= std::exp(-dp[j] * length);
      out.minus.samples[j] *= std::exp(-dm[j] * length);
      continue;
    }
    Eigen::Matrix2cd a;
    const cdouble gx = cross_transfer(dc, g.omega(j));
    a << -dp[j], -gx, -gx, -dm[j];
    const Eigen::Matrix2cd e = expm2(a * length);
    const cdouble p = v.plus.samples[j], m = v.minus.samples[j];
    out.plus.samples[j] = e(0, 0) * p + e(0, 1) * m;
    out.minus.samples[j] = e(1, 0) * p + e(1, 1) * m;
  }
  return out;
}

inline double vector_fidelity(const VectorField& in, const VectorField& out, double delta_eff) {
  return echo_fidelity(std::span(in), std::span(out), delta_eff);
}

inline double vector_efficiency(const VectorField& in, const VectorField& out, double delta_eff) {
  return echo_efficiency(std::span(in), std::span(out), delta_eff);
}

inline double dual_nominal_spacing(const DualComb& dc) {
  return dc.base_plus().size() >= 2 ? nominal_spacing(dc.base_plus())
                                    : nominal_spacing(dc.base_minus());
}

struct VectorTraces {
  VectorField input;
  VectorField output;
  MemoryReport report;
};

/// Storage evaluator for a dual comb and a Gaussian pulse with fixed input
/// polarization; same single-pass strategy as ScalarStorage.  Not thread safe.
class DualStorage {
 public:
  DualStorage(const DualComb& dc, double length, const FrequencyGrid& grid,
              double delta_nominal, const Polarization& input = {},
              const WavePlate& plate = {}, const EchoSearch& search = {})
      : dc_(dc), length_(length), fg_(grid), tg_(reciprocal_time_grid(grid)),
        delta_nominal_(delta_nominal), pol_(input.normalized()), plate_(plate),
        search_(search) {
    require(length > 0.0 && std::isfinite(length), "medium length must be > 0");
    require(delta_nominal > 0.0, "nominal spacing must be > 0");
    check_coverage(dc.union_comb(), grid);
    dp_ = transfer_on_grid(dc.comb_plus(), grid);
    dm_ = transfer_on_grid(dc.comb_minus(), grid);
    for (auto& z : dp_) z *= length;
    for (auto& z : dm_) z *= length;
    if (dc.has_cross()) {
      gx_.resize(grid.n);
      for (std::size_t j = 0; j < grid.n; ++j) gx_[j] = cross_transfer(dc, grid.omega(j)) * length;
    }
    pre_ = phase_ramp(0.0, fg_.domega * tg_.t0, fg_.n);
    for (auto& c : out_) {
      c.t0 = tg_.t0;
      c.dt = tg_.dt;
      c.samples.resize(fg_.n);
    }
  }

  const FrequencyGrid& grid() const { return fg_; }
  const TimeGrid& time_grid() const { return tg_; }
  double delta_nominal() const { return delta_nominal_; }

  MemoryReport evaluate(const PulseParams& p, double weight_scale = 1.0) {
    require(weight_scale >= 0.0 && std::isfinite(weight_scale), "weight scale must be >= 0");
    require(p.width > 0.0 && std::isfinite(p.width) && std::isfinite(p.mean_offset),
            "pulse width must be > 0 and offsets finite");
    const double inv = 1.0 / (2.0 * p.width * p.width);
    auto& op = out_[0].samples;
    auto& om = out_[1].samples;
    double ein = 0.0;
    const bool cross = !gx_.empty();
    const bool use_plate = plate_.phase != 0.0 || plate_.delay != 0.0;
    for (std::size_t j = 0; j < fg_.n; ++j) {
      const double w = fg_.omega(j);
      const double x = w - p.mean_offset;
      const double arg = x * x * inv;
      if (arg > ScalarStorage::support_cutoff) {
        op[j] = 0.0;
        om[j] = 0.0;
        continue;
      }
      const double amp = std::exp(-arg);
      ein += amp * amp;
      const cdouble base = amp * pre_[j];
      const cdouble plate =
          use_plate ? std::polar(1.0, plate_.phase - w * plate_.delay) : cdouble{1.0, 0.0};
      if (!cross) {
        op[j] = base * pol_.plus * std::exp(-weight_scale * dp_[j]);
        om[j] = base * pol_.minus * std::exp(-weight_scale * dm_[j]) * plate;
      } else {
        Eigen::Matrix2cd a;
        const cdouble g = -weight_scale * gx_[j];
        a << -weight_scale * dp_[j], g, g, -weight_scale * dm_[j];
        const Eigen::Matrix2cd e = expm2(a);
        op[j] = base * (e(0, 0) * pol_.plus + e(0, 1) * pol_.minus);
        om[j] = base * (e(1, 0) * pol_.plus + e(1, 1) * pol_.minus) * plate;
      }
    }
    ein *= fg_.domega / two_pi;
    require(ein > 0.0, "input spectrum has no support on the grid");
    const double scale = fg_.domega / two_pi;
    for (auto& c : out_) {
      fft::transform(c.samples, fft::Direction::backward);
      for (auto& z : c.samples) z *= scale;
    }

    MemoryReport r;
    r.input = p;
    r.weight_scale = weight_scale;
    const auto peak = find_echo(std::span<const TemporalPulse>(out_), delta_nominal_, search_);
    r.echo_found = peak.has_value();
    r.echo_time = peak ? peak->time : two_pi / delta_nominal_;
    const auto win = echo_window(two_pi / r.echo_time);
    const auto w = window_weights(tg_, win.t1, win.t2);
    double eout = 0.0;
    cdouble ov{0.0, 0.0};
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
      const std::size_t k = w.first + i;
      const double t = tg_.time(k);
      const cdouble ph = std::polar(1.0, fg_.omega0 * t);
      const cdouble ref = std::conj(gaussian_time_envelope(p, t - r.echo_time));
      const cdouble ep = op[k] * ph, em = om[k] * ph;
      eout += w.weights[i] * (std::norm(ep) + std::norm(em));
      ov += w.weights[i] * ref * (std::conj(pol_.plus) * ep + std::conj(pol_.minus) * em);
    }
    r.efficiency = eout / ein;
    r.fidelity = eout > 0.0 ? std::norm(ov) / (ein * eout)
                            : std::numeric_limits<double>::quiet_NaN();
    return r;
  }

  /// Full traces via the generic path (propagate_vector + inverse transforms).
  VectorTraces traces(const PulseParams& p, double weight_scale = 1.0) {
    VectorTraces t;
    t.report = evaluate(p, weight_scale);
    FourierPair fp(tg_, fg_);
    const auto spec = gaussian_spectrum(fg_, p);
    VectorPulse v{spec, spec};
    for (auto& z : v.plus.samples) z *= pol_.plus;
    for (auto& z : v.minus.samples) z *= pol_.minus;
    t.input = {fp.to_time(v.plus), fp.to_time(v.minus)};
    auto out = propagate_vector(v, dc_.scaled(weight_scale), length_);
    for (std::size_t j = 0; j < fg_.n; ++j)
      out.minus.samples[j] *= std::polar(1.0, plate_.phase - fg_.omega(j) * plate_.delay);
    t.output = {fp.to_time(out.plus), fp.to_time(out.minus)};
    return t;
  }

 private:
  DualComb dc_;
  double length_;
  FrequencyGrid fg_;
  TimeGrid tg_;
  double delta_nominal_;
  Polarization pol_;
  WavePlate plate_;
  EchoSearch search_;
  std::vector<cdouble> dp_, dm_, gx_, pre_;
  VectorField out_;
};

// ---------------------------------------------------------------------------
// Shift sweep
// ---------------------------------------------------------------------------
enum class ShiftSweepMode {
  optimize_width_and_mean,
  fixed_width_optimize_mean,
};

struct ShiftSweepSettings {
  PulseBounds bounds;         // width bounds ignored in fixed-width mode
  double fixed_width = 0.0;   // rad/s, used in fixed-width mode
  double weight_scale = 1.0;
  Polarization input{};
  WavePlate plate{};
  GridPolicy policy{};
  OptimizerSettings optimizer{};
};

inline std::vector<SweepRow> sweep_shift(const DualComb& dc, double length,
                                         std::span<const double> shifts,
                                         ShiftSweepMode mode,
                                         const ShiftSweepSettings& s) {
  const double dnom = dual_nominal_spacing(dc);
  const double wmax = mode == ShiftSweepMode::fixed_width_optimize_mean ? s.fixed_width
                                                                        : s.bounds.width.hi;
  require(wmax > 0.0, "shift sweep needs a positive pulse width");
  auto point = [&](double lambda) {
    const auto shifted = dc.with_shift(lambda);
    DualStorage st(shifted, length, grid_for_comb(shifted.union_comb(), wmax, s.policy), dnom,
                   s.input, s.plate);
    StorageObjective obj = [&](const PulseParams& p, double w) { return st.evaluate(p, w); };
    if (mode == ShiftSweepMode::fixed_width_optimize_mean)
      return optimize_pulse(obj, s.bounds, OptimizeMode::mean_only, {s.fixed_width, 0.0},
                            s.weight_scale, s.optimizer);
    return optimize_pulse(obj, s.bounds, OptimizeMode::width_and_mean, {}, s.weight_scale,
                          s.optimizer);
  };
  return sweep("lambda", shifts, point);
}

} // namespace iafc
