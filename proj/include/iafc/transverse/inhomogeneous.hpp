// inhomogeneous.hpp
// -----------------
// Propagation through a comb medium whose atomic density varies across the
// beam.  For each frequency sample the envelope obeys
//
//     ∂_z Ẽ = (i/2k) ∇⊥² Ẽ − n(r⊥) 𝒟(ω) Ẽ,
//
// solved by Strang splitting: half a diffraction step in q-space, a full
// absorption step n(r⊥)𝒟(ω)dz in real space, half a diffraction step.
// Adjacent half steps are merged, so nz steps cost nz+1 FFT pairs.  The
// diffraction phase is ω-independent (carrier wavenumber), so its tables are
// built once.  Frequency slices are independent; they are accumulated onto a
// window of output times with blocked matrix products and may be spread
// across threads.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/grid.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/spectral/echo.hpp"
#include "iafc/spectral/pulse.hpp"
#include "iafc/transverse/field.hpp"
#include "iafc/transverse/free.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <vector>

namespace iafc {

// ---------------------------------------------------------------------------
// Density profile
// ---------------------------------------------------------------------------

struct DensityProfile {
  enum class Kind { homogeneous, gaussian };
  Kind kind = Kind::homogeneous;
  double n0 = 1.0;       // relative density scaling the comb weights
  double w0_prime = 0.0; // Gaussian width, m (gaussian kind only)

  static DensityProfile homogeneous(double n0 = 1.0) { return {Kind::homogeneous, n0, 0.0}; }
  static DensityProfile gaussian(double w0_prime, double n0 = 1.0) {
    return {Kind::gaussian, n0, w0_prime};
  }
  void validate() const {
    require(n0 >= 0.0 && std::isfinite(n0), "density n0 must be >= 0");
    if (kind == Kind::gaussian)
      require(w0_prime > 0.0 && std::isfinite(w0_prime), "density width w0' must be > 0");
  }
  /// n(r⊥) = n0 e^{−r²/(2 w0'²)} for the Gaussian kind.
  double at(double r2) const {
    return kind == Kind::homogeneous ? n0 : n0 * std::exp(-r2 / (2.0 * w0_prime * w0_prime));
  }
};

// ---------------------------------------------------------------------------
// Space-time output on a window of sample times
// ---------------------------------------------------------------------------

/// E(r⊥, t_k) for t_k = t0 + k·dt, k < nt; stored as data[r·nt + k] with r
/// the row-major transverse index.
struct SpaceTimeField {
  TransverseGrid grid;
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t nt = 0;
  std::vector<cdouble> data;

  TimeGrid times() const { return {t0, dt, nt}; }
  cdouble& at(std::size_t r, std::size_t k) { return data[r * nt + k]; }
  const cdouble& at(std::size_t r, std::size_t k) const { return data[r * nt + k]; }
};

/// Index range of the reciprocal time grid of `fg` inside [t1, t2].
inline std::pair<std::size_t, std::size_t> window_index_range(const TimeGrid& tg, double t1,
                                                              double t2) {
  const double a = std::ceil((t1 - tg.t0) / tg.dt);
  const double b = std::floor((t2 - tg.t0) / tg.dt);
  require(a >= 0.0 && b <= static_cast<double>(tg.n - 1) && b > a,
          "output time window lies outside the time grid");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

inline double relative_l2(const SpaceTimeField& a, const SpaceTimeField& b) {
  require(a.data.size() == b.data.size(), "space-time fields differ in shape");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// ---------------------------------------------------------------------------
// Single-frequency split-step propagator
// ---------------------------------------------------------------------------

/// Precomputed state shared by all frequency slices of one solve.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const TransverseGrid& grid, double wavelength, double length,
                      const DensityProfile& density, std::size_t nz, bool diffraction)
      : grid_(grid), length_(length), nz_(nz), diffraction_(diffraction) {
    grid.validate();
    density.validate();
    require(nz >= 1, "split-step solver needs nz >= 1");
    require(length >= 0.0 && std::isfinite(length), "medium length must be >= 0");
    dz_ = length / static_cast<double>(nz);
    if (diffraction_) {
      require(wavelength > 0.0, "wavelength must be > 0");
      if (dz_ * max_kernel_rate(grid, wavelength) >= pi)
        throw StepSizeError("split-step dz violates the aliasing criterion; increase nz");
      half_ = free_kernel(grid, wavelength, 0.5 * dz_);
      full_ = free_kernel(grid, wavelength, dz_);
    }
    // Group grid points by density value: the absorption factor is evaluated
    // once per distinct value and scattered.
    std::map<double, std::uint32_t> ids;
    std::vector<double> rho(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i), y = grid.y(j);
        rho[j * grid.nx + i] = density.at(x * x + y * y);
      }
    for (double v : rho) ids.emplace(v, 0);
    levels_.reserve(ids.size());
    for (auto& [v, id] : ids) {
      id = static_cast<std::uint32_t>(levels_.size());
      levels_.push_back(v);
    }
    index_.resize(grid.size());
    for (std::size_t r = 0; r < rho.size(); ++r) index_[r] = ids.at(rho[r]);
  }

  std::size_t nz() const { return nz_; }
  const TransverseGrid& grid() const { return grid_; }

  /// Propagate `u` (in place) at one frequency with per-unit-density transfer
  /// value `d` = 𝒟(ω).  `factors` is caller-provided scratch.
  void run(std::span<cdouble> u, cdouble d, std::vector<cdouble>& factors) const {
    factors.resize(levels_.size());
    const double step = diffraction_ ? dz_ : length_;
    for (std::size_t l = 0; l < levels_.size(); ++l)
      factors[l] = std::exp(-levels_[l] * d * step);
    auto absorb = [&] {
      for (std::size_t r = 0; r < u.size(); ++r) u[r] *= factors[index_[r]];
    };
    if (!diffraction_) {
      absorb();
      return;
    }
    apply_q_phase(u, grid_, half_);
    for (std::size_t s = 0; s < nz_; ++s) {
      absorb();
      apply_q_phase(u, grid_, s + 1 < nz_ ? std::span<const cdouble>(full_)
                                          : std::span<const cdouble>(half_));
    }
  }

 private:
  TransverseGrid grid_;
  double length_;
  std::size_t nz_;
  bool diffraction_;
  double dz_ = 0.0;
  std::vector<cdouble> half_, full_;
  std::vector<double> levels_;
  std::vector<std::uint32_t> index_;
};

/// Monochromatic propagation of `f0` through length L of density-weighted
/// medium with transfer value `d` per unit density.
inline TransverseField propagate_monochromatic(const TransverseField& f0, cdouble d,
                                               double length, const DensityProfile& density,
                                               std::size_t nz, bool diffraction = true) {
  SplitStepPropagator prop(f0.grid, f0.wavelength, length, density, nz, diffraction);
  TransverseField out = f0;
  out.z = f0.z + length;
  std::vector<cdouble> scratch;
  prop.run(out.samples, d, scratch);
  return out;
}

// ---------------------------------------------------------------------------
// Broadband solve
// ---------------------------------------------------------------------------

struct InhomogeneousOptions {
  double delta_nominal = 0.0; // rad/s; sets the output window
  double window_lo = 0.4;     // output times from window_lo·2π/Δ ...
  double window_hi = 1.6;     // ... to window_hi·2π/Δ
  double spectral_cutoff = 16.0; // skip samples with |Ẽ_in| < e^{−cutoff}·max
  bool diffraction = true;
  bool check_convergence = true;
  double convergence_tol = 1e-3;
  std::size_t nz_max = 256;
  std::size_t probe_frequencies = 32;
  unsigned threads = 1;
};

struct InhomogeneousResult {
  SpaceTimeField field;
  std::size_t nz = 0;               // accepted step count
  double convergence_change = 0.0;  // probe L2 change between nz and 2nz
};

namespace detail {

inline std::vector<std::size_t> spectral_support(const SpectralPulse& s, double cutoff) {
  double peak = 0.0;
  for (const auto& z : s.samples) peak = std::max(peak, std::abs(z));
  require(peak > 0.0, "input spectrum is identically zero");
  const double floor = peak * std::exp(-cutoff);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (std::abs(s.samples[j]) >= floor) idx.push_back(j);
  return idx;
}

/// Relative L2 change of probe slices between nz and 2nz steps.
inline double probe_change(const TransverseField& f0, const SpectralPulse& s,
                           const MediumSpec& medium, const DensityProfile& density,
                           std::span<const std::size_t> probes, std::size_t nz,
                           bool diffraction) {
  SplitStepPropagator a(f0.grid, f0.wavelength, medium.length, density, nz, diffraction);
  SplitStepPropagator b(f0.grid, f0.wavelength, medium.length, density, 2 * nz, diffraction);
  std::vector<cdouble> ua, ub, scratch;
  double num = 0.0, den = 0.0;
  for (std::size_t j : probes) {
    const cdouble d = transfer_function(medium.comb, s.omega(j));
    const double w = std::norm(s.samples[j]);
    ua = f0.samples;
    ub = f0.samples;
    a.run(ua, d, scratch);
    b.run(ub, d, scratch);
    for (std::size_t r = 0; r < ua.size(); ++r) {
      num += w * std::norm(ua[r] - ub[r]);
      den += w * std::norm(ub[r]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace detail

/// Broadband propagation of the separable input f0(r⊥)·Ẽ(ω) through a medium
/// with transverse density profile `density`.  Returns E(r⊥, t) at z = L on
/// the output-time window.  With check_convergence, nz is doubled (starting
/// from `nz`) until probe slices change by less than convergence_tol.
inline InhomogeneousResult propagate_inhomogeneous(const TransverseField& f0,
                                                   const SpectralPulse& temporal,
                                                   const MediumSpec& medium,
                                                   const DensityProfile& density,
                                                   std::size_t nz,
                                                   const InhomogeneousOptions& opt) {
  medium.validate();
  density.validate();
  require(nz >= 1, "nz must be >= 1");
  require(opt.delta_nominal > 0.0, "options.delta_nominal must be > 0");
  require(opt.window_hi > opt.window_lo && opt.window_lo > 0.0, "empty output window");
  check_coverage(medium.comb, temporal.grid());

  const auto support = detail::spectral_support(temporal, opt.spectral_cutoff);
  InhomogeneousResult res;

  // Step-count selection by doubling.
  res.nz = nz;
  if (opt.check_convergence && opt.diffraction) {
    std::vector<std::size_t> probes;
    const std::size_t np = std::min(opt.probe_frequencies, support.size());
    for (std::size_t i = 0; i < np; ++i)
      probes.push_back(support[(2 * i + 1) * support.size() / (2 * np)]);
    for (;;) {
      if (res.nz > opt.nz_max)
        throw ConvergenceError("split-step solver did not converge within nz_max = " +
                               std::to_string(opt.nz_max));
      res.convergence_change = detail::probe_change(f0, temporal, medium, density, probes,
                                                    res.nz, opt.diffraction);
      if (res.convergence_change < opt.convergence_tol) break;
      res.nz *= 2;
    }
  }

  const SplitStepPropagator prop(f0.grid, f0.wavelength, medium.length, density, res.nz,
                                 opt.diffraction);
  const TimeGrid tg = reciprocal_time_grid(temporal.grid());
  const double period = two_pi / opt.delta_nominal;
  const auto [k_lo, k_hi] = window_index_range(tg, opt.window_lo * period, opt.window_hi * period);
  const std::size_t nt = k_hi - k_lo + 1;
  const std::size_t R = f0.grid.size();
  const double t_first = tg.time(k_lo);
  const double norm = temporal.domega / two_pi;

  using RowMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using ColMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
  constexpr std::size_t block = 64;
  const unsigned nthreads = std::max(1u, opt.threads);
  std::vector<RowMat> partial(nthreads, RowMat::Zero(static_cast<Eigen::Index>(R),
                                                     static_cast<Eigen::Index>(nt)));
  const std::size_t nblocks = (support.size() + block - 1) / block;

  auto worker = [&](unsigned tid) {
    ColMat slices(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(block));
    RowMat phases(static_cast<Eigen::Index>(block), static_cast<Eigen::Index>(nt));
    std::vector<cdouble> scratch;
    for (std::size_t b = tid; b < nblocks; b += nthreads) {
      const std::size_t j0 = b * block;
      const std::size_t m = std::min(block, support.size() - j0);
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t j = support[j0 + c];
        const double w = temporal.omega(j);
        std::span<cdouble> col(slices.data() + c * R, R);
        std::copy(f0.samples.begin(), f0.samples.end(), col.begin());
        prop.run(col, density.n0 == 0.0 ? cdouble{} : transfer_function(medium.comb, w),
                 scratch);
        const auto ramp = phase_ramp(w * t_first, w * tg.dt, nt);
        const cdouble a = temporal.samples[j] * norm;
        for (std::size_t k = 0; k < nt; ++k)
          phases(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = a * ramp[k];
      }
      const auto mi = static_cast<Eigen::Index>(m);
      partial[tid].noalias() += slices.leftCols(mi) * phases.topRows(mi);
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (unsigned t = 1; t < nthreads; ++t) partial[0] += partial[t];

  res.field.grid = f0.grid;
  res.field.t0 = t_first;
  res.field.dt = tg.dt;
  res.field.nt = nt;
  res.field.data.assign(partial[0].data(), partial[0].data() + R * nt);
  return res;
}

/// The separable homogeneous output sampled on the same output window as
/// propagate_inhomogeneous, for direct comparison.
inline SpaceTimeField outer_product(const SeparableOutput& out, double delta_nominal,
                                    double window_lo = 0.4, double window_hi = 1.6) {
  const TimeGrid tg = out.temporal.grid();
  const double period = two_pi / delta_nominal;
  const auto [k_lo, k_hi] = window_index_range(tg, window_lo * period, window_hi * period);
  SpaceTimeField f;
  f.grid = out.transverse.grid;
  f.t0 = tg.time(k_lo);
  f.dt = tg.dt;
  f.nt = k_hi - k_lo + 1;
  f.data.resize(f.grid.size() * f.nt);
  for (std::size_t r = 0; r < f.grid.size(); ++r)
    for (std::size_t k = 0; k < f.nt; ++k)
      f.data[r * f.nt + k] = out.transverse.samples[r] * out.temporal.samples[k_lo + k];
  return f;
}

// ---------------------------------------------------------------------------
// Figures of merit
// ---------------------------------------------------------------------------

/// η and F of a space-time output against the separable input
/// f0(r⊥)·E_in(t).  The echo is located on the transversely integrated
/// intensity; the reference is the input profile delayed by the echo time.
inline MemoryReport analyze_space_time(const SpaceTimeField& out, const TransverseField& f0,
                                       const SpectralPulse& temporal, double delta_nominal,
                                       const EchoSearch& search = {}) {
  require(out.grid.size() == f0.grid.size(), "input profile and output grid differ");
  const std::size_t R = out.grid.size(), nt = out.nt;
  const double cell = out.grid.cell();
  TemporalPulse trace{out.t0, out.dt, std::vector<cdouble>(nt)};
  for (std::size_t k = 0; k < nt; ++k) {
    double s = 0.0;
    for (std::size_t r = 0; r < R; ++r) s += std::norm(out.data[r * nt + k]);
    trace.samples[k] = std::sqrt(s * cell);
  }
  MemoryReport rep;
  const auto peak = find_echo(trace, delta_nominal, search);
  rep.echo_found = peak.has_value();
  rep.echo_time = peak ? peak->time : two_pi / delta_nominal;
  const auto win = echo_window(two_pi / rep.echo_time);
  const auto w = window_weights(out.times(), win.t1, win.t2);

  // Delayed input on the window samples by direct Fourier summation.
  const TimeGrid tg{out.t0, out.dt, nt};
  const auto delayed = delayed_on_grid(to_time(temporal, reciprocal_time_grid(temporal.grid())),
                                       rep.echo_time, tg);
  const double ein = field_energy(f0) * energy(temporal);
  require(ein > 0.0, "input has zero energy");
  double eout = 0.0;
  cdouble ov{0.0, 0.0};
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const std::size_t k = w.first + i;
    cdouble proj{0.0, 0.0};
    double e = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      const cdouble v = out.data[r * nt + k];
      e += std::norm(v);
      proj += std::conj(f0.samples[r]) * v;
    }
    eout += w.weights[i] * e * cell;
    ov += w.weights[i] * std::conj(delayed.samples[k]) * proj * cell;
  }
  rep.efficiency = eout / ein;
  rep.fidelity = eout > 0.0 ? std::norm(ov) / (ein * eout)
                            : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

} // namespace iafc
