// vortex.hpp
// ----------
// Vector-vortex fields and transverse-mode diagnostics.
//
// A vector-vortex state α|ℓ⟩|R⟩ + β|−ℓ⟩|L⟩ carries LG₀^ℓ on the σ⁺ (R)
// component and LG₀^{−ℓ} on the σ⁻ (L) component.  Circular unit vectors are
// ê± = (x̂ ± iŷ)/√2, so E_x = (E₊ + E₋)/√2 and E_y = i(E₊ − E₋)/√2.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/fft.hpp"
#include "iafc/transverse/field.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace iafc {

struct VectorTransverseField {
  TransverseField plus;  // σ⁺ / R component
  TransverseField minus; // σ⁻ / L component
};

/// α·LG₀^ℓ ê₊ + β·LG₀^{−ℓ} ê₋ on `grid` at z = 0.  Requires |α|²+|β|² = 1.
inline VectorTransverseField make_vector_vortex(cdouble alpha, cdouble beta, int ell,
                                                const TransverseGrid& grid, double w0,
                                                double wavelength) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > 1e-9)
    throw InvalidArgument("vector-vortex coefficients must satisfy |α|²+|β|² = 1");
  VectorTransverseField v{lg_mode({ell, 0, w0, wavelength}, 0.0, grid),
                          lg_mode({-ell, 0, w0, wavelength}, 0.0, grid)};
  for (auto& s : v.plus.samples) s *= alpha;
  for (auto& s : v.minus.samples) s *= beta;
  return v;
}

struct Stokes {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  /// Orientation of the polarization ellipse, in (−π/2, π/2].
  double orientation() const { return 0.5 * std::atan2(s2, s1); }
};

/// Local Stokes parameters from the circular components.
inline Stokes stokes(cdouble e_plus, cdouble e_minus) {
  const double r2 = 1.0 / std::sqrt(2.0);
  const cdouble ex = (e_plus + e_minus) * r2;
  const cdouble ey = cdouble{0.0, 1.0} * (e_plus - e_minus) * r2;
  const cdouble c = std::conj(ex) * ey;
  return {std::norm(ex) + std::norm(ey), std::norm(ex) - std::norm(ey), 2.0 * c.real(),
          2.0 * c.imag()};
}

inline std::vector<Stokes> stokes_field(const VectorTransverseField& v) {
  require(v.plus.samples.size() == v.minus.samples.size(), "component grids differ");
  std::vector<Stokes> s(v.plus.samples.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = stokes(v.plus.samples[i], v.minus.samples[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Azimuthal (OAM) spectrum
// ---------------------------------------------------------------------------

/// Energy per azimuthal index m, from rings of radius r sampled by bilinear
/// interpolation and Fourier-analysed in φ:
///   P(m) = Σ_r |c_m(r)|² 2π r dr,   c_m(r) = (1/Nφ) Σ_n u(r, φ_n) e^{−imφ_n}.
struct AzimuthalSpectrum {
  int half = 0;               // bins m ∈ [−half, half)
  std::vector<double> energy; // energy[m + half]

  double at(int m) const {
    return (m >= -half && m < half) ? energy[static_cast<std::size_t>(m + half)] : 0.0;
  }
  double total() const {
    double s = 0.0;
    for (double e : energy) s += e;
    return s;
  }
  /// Fraction of the energy in the listed bins.
  double fraction(const std::vector<int>& bins) const {
    double s = 0.0;
    for (int m : bins) s += at(m);
    return s / total();
  }
};

inline cdouble bilinear(const TransverseField& f, double x, double y) {
  const auto& g = f.grid;
  const double u = x / g.dx + static_cast<double>(g.nx / 2);
  const double v = y / g.dy + static_cast<double>(g.ny / 2);
  const double fu = std::floor(u), fv = std::floor(v);
  if (fu < 0.0 || fv < 0.0 || fu + 1.0 > static_cast<double>(g.nx - 1) ||
      fv + 1.0 > static_cast<double>(g.ny - 1))
    return {0.0, 0.0};
  const auto i = static_cast<std::size_t>(fu), j = static_cast<std::size_t>(fv);
  const double a = u - fu, b = v - fv;
  return (1 - a) * (1 - b) * f.at(i, j) + a * (1 - b) * f.at(i + 1, j) +
         (1 - a) * b * f.at(i, j + 1) + a * b * f.at(i + 1, j + 1);
}

inline AzimuthalSpectrum azimuthal_spectrum(const TransverseField& f, std::size_t n_phi = 256) {
  require(n_phi >= 8 && n_phi % 2 == 0, "azimuthal sampling must be even and >= 8");
  const auto& g = f.grid;
  const double dr = std::min(g.dx, g.dy);
  const double rmax = 0.5 * std::min(g.extent_x(), g.extent_y()) - 2.0 * dr;
  AzimuthalSpectrum s;
  s.half = static_cast<int>(n_phi / 2);
  s.energy.assign(n_phi, 0.0);
  std::vector<cdouble> ring(n_phi);
  for (double r = 0.5 * dr; r < rmax; r += dr) {
    for (std::size_t n = 0; n < n_phi; ++n) {
      const double phi = two_pi * static_cast<double>(n) / static_cast<double>(n_phi);
      ring[n] = bilinear(f, r * std::cos(phi), r * std::sin(phi));
    }
    fft::transform(ring, fft::Direction::forward);
    for (std::size_t n = 0; n < n_phi; ++n) {
      const int m = n < n_phi / 2 ? static_cast<int>(n) : static_cast<int>(n) - static_cast<int>(n_phi);
      const double c2 = std::norm(ring[n]) / static_cast<double>(n_phi * n_phi);
      s.energy[static_cast<std::size_t>(m + s.half)] += c2 * two_pi * r * dr;
    }
  }
  return s;
}

} // namespace iafc
