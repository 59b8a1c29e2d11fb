// velocity.hpp
// ------------
// Reference model for thermal broadening: the comb response averaged over
// the Maxwell–Boltzmann velocity distribution itself rather than its
// Lorentzian fit.
//
// The Doppler shift is linear in velocity, δ = c·v, so for an isotropic
// Gaussian velocity distribution with per-component spread σ_v it is itself
// Gaussian with σ_δ = |c| σ_v.  Each tooth's response becomes
//
//     V(x) = ∫ g(δ) / (i(x + δ) + γ/2) dδ,   g = N(0, σ_δ²),  x = Δ_n + ω,
//
// evaluated by adaptive quadrature with break points around the Lorentzian
// pole.  Far outside the Doppler profile (|x| > 11σ) the convergent moment
// series 1/z − σ²/z³ + 3σ⁴/z⁵ − … (z = ix + γ/2) is used instead.  This path
// validates the Lorentzian approximation; it is not used for production runs.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/grid.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/thermal/doppler.hpp"
#include "iafc/transverse/field.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace iafc {

class GaussianLineAverage {
 public:
  GaussianLineAverage() : ws_(gsl_integration_workspace_alloc(limit), &gsl_integration_workspace_free) {
    require(ws_ != nullptr, "could not allocate quadrature workspace");
  }

  /// E_δ[1/(i(x+δ) + γ/2)] for δ ~ N(0, σ²).
  cdouble operator()(double x, double gamma, double sigma) const {
    require(gamma > 0.0 && sigma >= 0.0, "line average needs γ > 0 and σ >= 0");
    const cdouble z{gamma / 2.0, x};
    if (sigma == 0.0) return 1.0 / z;
    if (std::abs(x) > series_cut * sigma) {
      // Σ_m (−1)^m (2m−1)!! σ^{2m} / z^{2m+1}
      const cdouble s2 = sigma * sigma / (z * z);
      cdouble term = 1.0 / z, sum = term;
      for (int m = 1; m <= 6; ++m) {
        term *= -static_cast<double>(2 * m - 1) * s2;
        sum += term;
      }
      return sum;
    }
    Params par{x, gamma / 2.0, sigma};
    const double u0 = -x / sigma, du = 40.0 * par.half / sigma;
    std::vector<double> pts{-range, range};
    for (double p : {u0 - du, u0, u0 + du})
      if (p > -range && p < range) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    const double scale = 1.0 / std::hypot(x, par.half);
    return {integrate(&re_part, par, pts, scale), integrate(&im_part, par, pts, scale)};
  }

  static constexpr double range = 9.0;       // Gaussian truncated at ±9σ
  static constexpr double series_cut = 11.0; // moment series beyond 11σ

 private:
  struct Params {
    double x, half, sigma;
  };
  static double gauss(double u) { return std::exp(-0.5 * u * u) / std::sqrt(two_pi); }
  static double re_part(double u, void* p) {
    const auto& q = *static_cast<Params*>(p);
    const double d = q.x + q.sigma * u;
    return gauss(u) * q.half / (d * d + q.half * q.half);
  }
  static double im_part(double u, void* p) {
    const auto& q = *static_cast<Params*>(p);
    const double d = q.x + q.sigma * u;
    return -gauss(u) * d / (d * d + q.half * q.half);
  }
  double integrate(double (*fn)(double, void*), Params& par, std::vector<double>& pts,
                   double scale) const {
    gsl_function F{fn, &par};
    double result = 0.0, err = 0.0;
    const auto old = gsl_set_error_handler_off();
    const int status = gsl_integration_qagp(&F, pts.data(), pts.size(), 1e-13 * scale, 1e-10,
                                            limit, ws_.get(), &result, &err);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS && err > 1e-7 * scale)
      throw NumericalError(std::string("velocity-class quadrature failed: ") +
                           gsl_strerror(status));
    return result;
  }

  static constexpr std::size_t limit = 1000;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws_;
};

/// Velocity-averaged comb response on a grid: Σ_n w_n V(Δ_n + ω_j).
inline std::vector<cdouble> gaussian_transfer_on_grid(const FrequencyComb& comb,
                                                      double sigma_doppler,
                                                      const FrequencyGrid& grid) {
  GaussianLineAverage avg;
  std::vector<cdouble> out(grid.n, cdouble{});
  for (const auto& t : comb.teeth()) {
    if (t.weight == 0.0) continue;
    for (std::size_t j = 0; j < grid.n; ++j)
      out[j] += t.weight * avg(t.detuning + grid.omega(j), t.linewidth, sigma_doppler);
  }
  return out;
}

/// Doppler spread σ_δ = σ_v·|c(r⊥)| averaged over the intensity of mode `m`
/// on a (small) transverse grid at plane z.
inline double beam_doppler_spread(const ThermalSpec& spec, const LGModeSpec& m,
                                  const TransverseGrid& grid, double z) {
  spec.validate();
  const auto u = lg_mode(m, 0.0, grid);
  const double floor = 0.5 * std::min(grid.dx, grid.dy);
  double acc = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double r = std::max(std::hypot(grid.x(i), grid.y(j)), floor);
      const auto c = doppler_coefficients(m, r, z);
      const double w = std::norm(u.at(i, j));
      acc += w * std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
      norm += w;
    }
  return spec.velocity_spread() * acc / norm;
}

} // namespace iafc
