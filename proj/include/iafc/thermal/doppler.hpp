// doppler.hpp
// -----------
// Thermal motion in an LG beam: the velocity-dependent Doppler shift and the
// Lorentzian velocity-average approximation that turns it into a
// position-dependent broadening of every comb tooth,
//
//     γ/2  →  γ/2 + a·f(r⊥, z),        a = c_fit·√(k_B T / m),
//
// with the broadening function
//
//     f = k(x+y)/z̄ + ℓ(x−y)/(x²+y²) − (2p+|ℓ|+1) z_R/(z²+z_R²)
//         − k(x²+y²)(z²−z_R²) / (2 z̄² z²) + k,          z̄ = (z²+z_R²)/z.
//
// The fourth term is evaluated in the algebraically equivalent form
// k r²(z²−z_R²)/(2(z²+z_R²)²), which stays finite at z = 0, and the
// azimuthal term uses r² → max(r², (dx/2)²) on the optical axis.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/units.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/transverse/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace iafc {

struct ThermalSpec {
  double temperature = 0.0; // K
  double mass = 0.0;        // kg
  double fit_const = 0.76;  // Lorentzian-fit constant

  void validate() const {
    require(temperature >= 0.0 && std::isfinite(temperature), "temperature must be >= 0");
    require(mass > 0.0 && std::isfinite(mass), "atomic mass must be > 0");
    require(fit_const > 0.0 && std::isfinite(fit_const), "fit constant must be > 0");
  }
  /// One-dimensional thermal velocity spread √(k_B T / m), m/s.
  double velocity_spread() const { return std::sqrt(constants::boltzmann * temperature / mass); }
  /// Lorentzian half-width a of the fitted velocity distribution, m/s.
  double a() const { return fit_const * velocity_spread(); }
};

// ---------------------------------------------------------------------------
// Doppler shift of a moving atom
// ---------------------------------------------------------------------------

struct Velocity {
  double x = 0.0, y = 0.0, z = 0.0; // m/s
};

/// Doppler-shift coefficients (c_z, c_r, c_φ) such that δ = c_z v_z + c_r v_r
/// + c_φ v_φ, with the local cylindrical velocity components.
inline std::array<double, 3> doppler_coefficients(const LGModeSpec& m, double r, double z) {
  m.validate();
  require(r >= 0.0 && std::isfinite(r) && std::isfinite(z), "invalid position");
  if (m.ell != 0 && r == 0.0)
    throw InvalidArgument("azimuthal Doppler term is singular on the axis for ℓ ≠ 0");
  const double k = m.k(), zr = m.rayleigh();
  const double s = z * z + zr * zr;
  const double cz = -k + k * r * r * (z * z - zr * zr) / (2.0 * s * s) - (m.order() + 1) * zr / s;
  const double cr = -k * r * z / s; // −k r / z̄
  const double cphi = r > 0.0 ? -m.ell / r : 0.0;
  return {cz, cr, cphi};
}

/// Total Doppler shift δ_z + δ_r + δ_φ (rad/s) of an atom at (r, φ, z)
/// moving with Cartesian velocity v.
inline double doppler_shift(const LGModeSpec& m, double r, double phi, double z,
                            const Velocity& v) {
  const auto c = doppler_coefficients(m, r, z);
  const double vr = v.x * std::cos(phi) + v.y * std::sin(phi);
  const double vphi = -v.x * std::sin(phi) + v.y * std::cos(phi);
  return c[0] * v.z + c[1] * vr + c[2] * vphi;
}

// ---------------------------------------------------------------------------
// Broadening function f
// ---------------------------------------------------------------------------

/// Selects the terms of f, for contribution analysis.
struct DopplerTerms {
  bool transverse = true; // k(x+y)/z̄
  bool azimuthal = true;  // ℓ(x−y)/r²
  bool gouy = true;       // −(2p+|ℓ|+1) z_R/(z²+z_R²)
  bool curvature = true;  // −k r²(z²−z_R²)/(2(z²+z_R²)²)
  bool longitudinal = true; // k

  static DopplerTerms only_longitudinal() { return {false, false, false, false, true}; }
  static DopplerTerms without_longitudinal() { return {true, true, true, true, false}; }
};

/// f at one point; `axis_r2` is the on-axis floor for the azimuthal term.
inline double f_value(const LGModeSpec& m, double x, double y, double z, double axis_r2,
                      const DopplerTerms& terms = {}) {
  const double k = m.k(), zr = m.rayleigh();
  const double s = z * z + zr * zr;
  const double r2 = x * x + y * y;
  double f = 0.0;
  if (terms.transverse) f += k * (x + y) * z / s;
  if (terms.azimuthal && m.ell != 0) f += m.ell * (x - y) / std::max(r2, axis_r2);
  if (terms.gouy) f -= (m.order() + 1) * zr / s;
  if (terms.curvature) f -= k * r2 * (z * z - zr * zr) / (2.0 * s * s);
  if (terms.longitudinal) f += k;
  return f;
}

struct DopplerField {
  TransverseGrid grid;
  double z = 0.0;
  std::vector<double> values; // 1/m, row-major like TransverseField
};

inline DopplerField f_field(const LGModeSpec& m, const TransverseGrid& grid, double z,
                            const DopplerTerms& terms = {}) {
  m.validate();
  grid.validate();
  require(std::isfinite(z), "evaluation plane must be finite");
  const double axis_r2 = 0.25 * std::min(grid.dx, grid.dy) * std::min(grid.dx, grid.dy);
  DopplerField f{grid, z, std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i)
      f.values[j * grid.nx + i] = f_value(m, grid.x(i), grid.y(j), z, axis_r2, terms);
  return f;
}

// ---------------------------------------------------------------------------
// Broadened comb response
// ---------------------------------------------------------------------------

/// The comb with every tooth's half-width γ/2 increased by a·f.  A negative
/// total is clamped to 10⁻³·γ/2 with a warning.
inline FrequencyComb thermal_comb(const FrequencyComb& comb, const ThermalSpec& spec,
                                  double f_val) {
  spec.validate();
  require(std::isfinite(f_val), "broadening function value must be finite");
  const double af = spec.a() * f_val;
  if (af == 0.0) return comb;
  std::vector<CombTooth> teeth;
  teeth.reserve(comb.size());
  bool clamped = false;
  for (const auto& t : comb.teeth()) {
    double half = 0.5 * t.linewidth + af;
    if (!(half > 0.0)) {
      half = 0.5e-3 * t.linewidth;
      clamped = true;
    }
    teeth.push_back({t.detuning, t.weight, 2.0 * half});
  }
  if (clamped)
    warn("thermal broadening made a tooth width non-positive; clamped to 1e-3·γ/2");
  return FrequencyComb(std::move(teeth));
}

/// 𝒟 with thermally broadened teeth at broadening-function value f_val.
inline cdouble thermal_transfer(const FrequencyComb& comb, const ThermalSpec& spec,
                                double f_val, double omega) {
  return transfer_function(thermal_comb(comb, spec, f_val), omega);
}

} // namespace iafc
