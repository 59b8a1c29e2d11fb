// storage.hpp
// -----------
// Storage of LG-mode pulses in a thermal comb medium.
//
// Each transverse point sees its own tooth broadening a·f(r⊥), so the output
// is E(r⊥, t) = Σ_c α_c u_c(r⊥) O(f_c(r⊥), t), where O(f, ·) is the temporal
// output of the comb broadened at f and every LG component c carries its own
// broadening function f_c.  O depends smoothly on f and f varies only by a
// relative ~10⁻³ across the beam, so O is interpolated in f through K
// Chebyshev nodes:
//
//     E(r⊥, t) = Σ_k B_k(r⊥) O_k(t),   B_k = Σ_c α_c u_c ℓ_k(f_c),
//
// with ℓ_k the Lagrange basis.  Energies and overlaps then reduce to K×K
// Gram matrices of the B_k, and one evaluation costs K FFTs.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/fft.hpp"
#include "iafc/spectral/echo.hpp"
#include "iafc/spectral/storage.hpp"
#include "iafc/thermal/doppler.hpp"
#include "iafc/transverse/field.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace iafc {

struct ThermalOptions {
  double z_eval = std::numeric_limits<double>::quiet_NaN(); // NaN → L/2
  std::size_t nodes = 5;                                    // Chebyshev nodes in f
  DopplerTerms terms{};
};

/// Chebyshev nodes on [lo, hi] (a single midpoint node when the interval is
/// degenerate) and the Lagrange basis through them.
struct ChebyshevNodes {
  std::vector<double> f;

  ChebyshevNodes(double lo, double hi, std::size_t k) {
    require(k >= 1 && lo <= hi, "invalid Chebyshev node request");
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    if (k == 1 || half <= 1e-14 * std::abs(mid)) {
      f = {mid};
      return;
    }
    for (std::size_t i = 0; i < k; ++i)
      f.push_back(mid + half * std::cos(pi * (2.0 * i + 1.0) / (2.0 * static_cast<double>(k))));
  }
  std::size_t size() const { return f.size(); }
  double basis(std::size_t k, double x) const {
    double v = 1.0;
    for (std::size_t j = 0; j < f.size(); ++j)
      if (j != k) v *= (x - f[j]) / (f[k] - f[j]);
    return v;
  }
};

/// Evaluator for Gaussian pulses carried by an LG superposition through a
/// thermal comb medium (no diffraction: L ≪ z_R).  Not thread-safe.
class ThermalStorage {
 public:
  ThermalStorage(const MediumSpec& medium, const ThermalSpec& spec,
                 const std::vector<ModeComponent>& components, const TransverseGrid& grid,
                 const FrequencyGrid& fg, double delta_nominal, const ThermalOptions& opt = {},
                 const EchoSearch& search = {})
      : fg_(fg), tg_(reciprocal_time_grid(fg)), delta_nominal_(delta_nominal), search_(search) {
    medium.validate();
    spec.validate();
    require(!components.empty(), "thermal storage needs at least one LG component");
    require(delta_nominal > 0.0, "nominal spacing must be > 0");
    check_coverage(medium.comb, fg);
    const double z = std::isnan(opt.z_eval) ? 0.5 * medium.length : opt.z_eval;

    // Input profile and per-component broadening functions.
    const std::size_t R = grid.size();
    std::vector<TransverseField> modes;
    std::vector<DopplerField> fs;
    TransverseField in{grid, 0.0, components.front().mode.wavelength, std::vector<cdouble>(R)};
    for (const auto& c : components) {
      modes.push_back(lg_mode(c.mode, 0.0, grid));
      fs.push_back(f_field(c.mode, grid, z, opt.terms));
      for (std::size_t r = 0; r < R; ++r) in.samples[r] += c.amplitude * modes.back().samples[r];
    }
    const double norm = std::sqrt(field_energy(in));
    require(norm > 0.0, "input superposition has zero energy");
    for (auto& v : in.samples) v /= norm;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& f : fs)
      for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    const ChebyshevNodes nodes = spec.a() == 0.0 ? ChebyshevNodes(lo, lo, 1)
                                                 : ChebyshevNodes(lo, hi, opt.nodes);
    nodes_ = nodes.f;
    const std::size_t K = nodes.size();

    // B_k fields, their Gram matrix and their projections on the input.
    std::vector<std::vector<cdouble>> B(K, std::vector<cdouble>(R));
    for (std::size_t c = 0; c < components.size(); ++c) {
      const cdouble a = components[c].amplitude / norm;
      for (std::size_t r = 0; r < R; ++r) {
        const cdouble u = a * modes[c].samples[r];
        if (u == cdouble{}) continue;
        for (std::size_t k = 0; k < K; ++k) B[k][r] += u * nodes.basis(k, fs[c].values[r]);
      }
    }
    gram_.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    proj_.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t q = 0; q < K; ++q) {
        cdouble s{0.0, 0.0};
        for (std::size_t r = 0; r < R; ++r) s += std::conj(B[k][r]) * B[q][r];
        gram_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q)) = s * grid.cell();
      }
      cdouble s{0.0, 0.0};
      for (std::size_t r = 0; r < R; ++r) s += std::conj(in.samples[r]) * B[k][r];
      proj_[k] = s * grid.cell();
    }

    // Medium response per node.
    for (double f : nodes_) {
      auto lD = transfer_on_grid(thermal_comb(medium.comb, spec, f), fg);
      for (auto& v : lD) v *= medium.length;
      response_.push_back(std::move(lD));
    }
    pre_phase_.resize(fg_.n);
    for (std::size_t j = 0; j < fg_.n; ++j)
      pre_phase_[j] = std::remainder(static_cast<double>(j) * fg_.domega * tg_.t0, two_pi);
    outs_.assign(K, std::vector<cdouble>(fg_.n));
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const FrequencyGrid& grid() const { return fg_; }

  MemoryReport evaluate(const PulseParams& p, double weight_scale = 1.0) {
    require(weight_scale >= 0.0 && std::isfinite(weight_scale), "weight scale must be >= 0");
    require(p.width > 0.0 && std::isfinite(p.width) && std::isfinite(p.mean_offset),
            "pulse width must be > 0 and offsets finite");
    const std::size_t K = nodes_.size(), N = fg_.n;
    const double inv = 1.0 / (2.0 * p.width * p.width);
    double ein = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      auto& out = outs_[k];
      const auto& lD = response_[k];
      for (std::size_t j = 0; j < N; ++j) {
        const double x = fg_.omega(j) - p.mean_offset;
        const double arg = x * x * inv;
        if (arg > ScalarStorage::support_cutoff) {
          out[j] = 0.0;
          continue;
        }
        if (k == 0) ein += std::exp(-2.0 * arg);
        out[j] = std::exp(cdouble(-arg - weight_scale * lD[j].real(),
                                  pre_phase_[j] - weight_scale * lD[j].imag()));
      }
      fft::transform(out, fft::Direction::backward);
      const double scale = fg_.domega / two_pi;
      for (auto& z : out) z *= scale;
    }
    ein *= fg_.domega / two_pi;
    require(ein > 0.0, "input spectrum has no support on the grid");

    // Transversely integrated intensity I(t) = Σ_kq G_kq conj(O_k) O_q.
    TemporalPulse trace{tg_.t0, tg_.dt, std::vector<cdouble>(N)};
    std::vector<double> inten(N);
    for (std::size_t t = 0; t < N; ++t) {
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        s += gram_(kk, kk).real() * std::norm(outs_[k][t]);
        for (std::size_t q = k + 1; q < K; ++q)
          s += 2.0 * (gram_(kk, static_cast<Eigen::Index>(q)) * std::conj(outs_[k][t]) *
                      outs_[q][t]).real();
      }
      inten[t] = std::max(s, 0.0);
      trace.samples[t] = std::sqrt(inten[t]);
    }

    MemoryReport r;
    r.input = p;
    r.weight_scale = weight_scale;
    const auto peak = find_echo(trace, delta_nominal_, search_);
    r.echo_found = peak.has_value();
    r.echo_time = peak ? peak->time : two_pi / delta_nominal_;
    const auto win = echo_window(two_pi / r.echo_time);
    const auto w = window_weights(tg_, win.t1, win.t2);
    double eout = 0.0;
    cdouble ov{0.0, 0.0};
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
      const std::size_t t = w.first + i;
      const double time = tg_.time(t);
      eout += w.weights[i] * inten[t];
      cdouble e{0.0, 0.0};
      for (std::size_t k = 0; k < K; ++k) e += proj_[k] * outs_[k][t];
      e *= std::polar(1.0, fg_.omega0 * time);
      ov += w.weights[i] * std::conj(gaussian_time_envelope(p, time - r.echo_time)) * e;
    }
    r.efficiency = eout / ein;
    r.fidelity = eout > 0.0 ? std::norm(ov) / (ein * eout)
                            : std::numeric_limits<double>::quiet_NaN();
    return r;
  }

 private:
  FrequencyGrid fg_;
  TimeGrid tg_;
  double delta_nominal_;
  EchoSearch search_;
  std::vector<double> nodes_;
  Eigen::MatrixXcd gram_;
  std::vector<cdouble> proj_;
  std::vector<std::vector<cdouble>> response_;
  std::vector<double> pre_phase_;
  std::vector<std::vector<cdouble>> outs_;
};

/// One thermal storage run with a Gaussian pulse on the default grid.
inline MemoryReport thermal_storage_run(const MediumSpec& medium, const ThermalSpec& spec,
                                        const std::vector<ModeComponent>& components,
                                        const TransverseGrid& grid, const PulseParams& pulse,
                                        const ThermalOptions& opt = {},
                                        double weight_scale = 1.0) {
  const auto fg = grid_for_comb(medium.comb, pulse.width);
  ThermalStorage st(medium, spec, components, grid, fg, nominal_spacing(medium.comb), opt);
  return st.evaluate(pulse, weight_scale);
}

} // namespace iafc
