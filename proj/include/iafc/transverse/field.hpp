// field.hpp
// ---------
// Transverse grids, fields and Laguerre–Gauss modes.
//
// LG modes use the e^{i(kz − ωt)} carrier convention, for which the paraxial
// equation reads ∂_z u = (i/2k) ∇⊥² u and
//
//   u_{p,ℓ}(r, φ, z) = C/w (√2 r/w)^{|ℓ|} L_p^{|ℓ|}(2r²/w²) e^{−r²/w²}
//                      × e^{i k r² z / (2(z² + z_R²))} e^{−i(2p+|ℓ|+1)ψ(z)} e^{iℓφ}
//
// with w(z) = w₀√(1 + z²/z_R²), ψ(z) = arctan(z/z_R), z_R = π w₀²/λ and
// C = √(2 p! / (π (p+|ℓ|)!)).
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/units.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

namespace iafc {

using cdouble = std::complex<double>;

struct LGModeSpec {
  int ell = 0;
  int p = 0;
  double w0 = 0.0;         // m
  double wavelength = 0.0; // m

  void validate() const {
    require(p >= 0, "LG radial index p must be >= 0");
    require(w0 > 0.0 && std::isfinite(w0), "LG waist w0 must be > 0");
    require(wavelength > 0.0 && std::isfinite(wavelength), "wavelength must be > 0");
  }
  double k() const { return two_pi / wavelength; }
  double rayleigh() const { return pi * w0 * w0 / wavelength; }
  double width(double z) const {
    const double zr = rayleigh();
    return w0 * std::sqrt(1.0 + z * z / (zr * zr));
  }
  double gouy(double z) const { return std::atan(z / rayleigh()); }
  /// Mode order N = 2p + |ℓ|.
  int order() const { return 2 * p + std::abs(ell); }
};

/// Square-cell transverse grid centred on the optical axis:
/// x_i = (i − nx/2) dx, so the axis is sampled exactly.
struct TransverseGrid {
  std::size_t nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;

  static TransverseGrid square(std::size_t n, double extent) {
    require(n >= 2 && extent > 0.0, "transverse grid needs n >= 2 and extent > 0");
    return {n, n, extent / static_cast<double>(n), extent / static_cast<double>(n)};
  }
  double x(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nx / 2)) * dx; }
  double y(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(ny / 2)) * dy; }
  std::size_t size() const { return nx * ny; }
  double cell() const { return dx * dy; }
  double extent_x() const { return static_cast<double>(nx) * dx; }
  double extent_y() const { return static_cast<double>(ny) * dy; }
  void validate() const {
    require(nx >= 2 && ny >= 2 && dx > 0.0 && dy > 0.0, "invalid transverse grid");
  }
};

/// Complex transverse field on a grid at longitudinal position z.  Samples are
/// row-major: index = j·nx + i for (x_i, y_j).
struct TransverseField {
  TransverseGrid grid;
  double z = 0.0;
  double wavelength = 0.0;
  std::vector<cdouble> samples;

  std::size_t nx() const { return grid.nx; }
  std::size_t ny() const { return grid.ny; }
  cdouble& at(std::size_t i, std::size_t j) { return samples[j * grid.nx + i]; }
  const cdouble& at(std::size_t i, std::size_t j) const { return samples[j * grid.nx + i]; }
};

inline double field_energy(const TransverseField& f) {
  double s = 0.0;
  for (const auto& z : f.samples) s += std::norm(z);
  return s * f.grid.cell();
}

/// ⟨a|b⟩ = Σ conj(a) b dx dy.
inline cdouble overlap(const TransverseField& a, const TransverseField& b) {
  require(a.samples.size() == b.samples.size() && a.grid.dx == b.grid.dx &&
              a.grid.dy == b.grid.dy,
          "overlap needs fields on the same grid");
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < a.samples.size(); ++i) s += std::conj(a.samples[i]) * b.samples[i];
  return s * a.grid.cell();
}

/// Analytic LG amplitude (unit L2 norm over the plane).
inline cdouble lg_value(const LGModeSpec& m, double x, double y, double z) {
  const int al = std::abs(m.ell);
  const double zr = m.rayleigh();
  const double w = m.width(z);
  const double r2 = x * x + y * y;
  const double s = 2.0 * r2 / (w * w);
  double lfact = 1.0; // p! / (p+|ℓ|)!
  for (int i = m.p + 1; i <= m.p + al; ++i) lfact /= i;
  const double c = std::sqrt(2.0 * lfact / pi) / w;
  const double radial = c * std::pow(std::sqrt(s), al) *
                        std::assoc_laguerre(static_cast<unsigned>(m.p),
                                            static_cast<unsigned>(al), s) *
                        std::exp(-r2 / (w * w));
  const double phase = m.k() * r2 * z / (2.0 * (z * z + zr * zr)) -
                       (m.order() + 1) * std::atan(z / zr) +
                       m.ell * std::atan2(y, x);
  return std::polar(radial, phase);
}

/// LG mode sampled on `grid` and renormalized to unit grid energy.
/// Throws ResolutionError if the grid has fewer than 8 samples per w(z), an
/// extent below 6 w(z), or truncates more than 1e-6 of the mode's energy.
inline TransverseField lg_mode(const LGModeSpec& m, double z, const TransverseGrid& grid) {
  m.validate();
  grid.validate();
  const double w = m.width(z);
  const double h = std::max(grid.dx, grid.dy);
  if (w / h < 8.0 * (1.0 - 1e-9))
    throw ResolutionError("transverse grid under-resolves the LG mode (" +
                          std::to_string(w / h) + " samples per beam radius, need 8)");
  if (std::min(grid.extent_x(), grid.extent_y()) < 6.0 * w * (1.0 - 1e-9))
    throw ResolutionError("transverse grid extent is below 6 beam radii");
  TransverseField f{grid, z, m.wavelength, std::vector<cdouble>(grid.size())};
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) f.at(i, j) = lg_value(m, grid.x(i), grid.y(j), z);
  const double e = field_energy(f);
  if (e < 1.0 - 1e-6)
    throw ResolutionError("transverse grid truncates the LG mode (captured energy " +
                          std::to_string(e) + ")");
  const double s = 1.0 / std::sqrt(e);
  for (auto& v : f.samples) v *= s;
  return f;
}

/// Coherent superposition Σ c_i LG_i (all modes share w0 and wavelength),
/// normalized to unit grid energy.
struct ModeComponent {
  LGModeSpec mode;
  cdouble amplitude{1.0, 0.0};
};

inline TransverseField superposition(const std::vector<ModeComponent>& comps, double z,
                                     const TransverseGrid& grid) {
  require(!comps.empty(), "superposition needs at least one mode");
  TransverseField f{grid, z, comps.front().mode.wavelength, std::vector<cdouble>(grid.size())};
  for (const auto& c : comps) {
    require(c.mode.wavelength == f.wavelength, "superposed modes must share the wavelength");
    const auto m = lg_mode(c.mode, z, grid);
    for (std::size_t i = 0; i < f.samples.size(); ++i) f.samples[i] += c.amplitude * m.samples[i];
  }
  const double e = field_energy(f);
  require(e > 0.0, "superposition has zero energy");
  for (auto& v : f.samples) v /= std::sqrt(e);
  return f;
}

} // namespace iafc
