// free.hpp
// --------
// Free-space paraxial propagation and the separable homogeneous-medium
// solution.
//
// The paraxial kernel acts in transverse-wavenumber space as the pure phase
// e^{−i q² dz / 2k}, so one step is FFT → phase → inverse FFT and conserves
// the grid energy exactly (up to rounding).  In a homogeneous medium the
// propagation factorizes: the transverse profile diffracts freely while the
// temporal envelope sees the comb transfer function e^{−𝒟(ω)L}.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/fft.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/spectral/echo.hpp"
#include "iafc/spectral/propagate.hpp"
#include "iafc/spectral/pulse.hpp"
#include "iafc/transverse/field.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace iafc {

// ---------------------------------------------------------------------------
// Transverse wavenumbers
// ---------------------------------------------------------------------------

/// FFT-ordered angular wavenumbers 2π·m/(n·d), m = 0, 1, …, −1.
inline std::vector<double> fft_wavenumbers(std::size_t n, double d) {
  std::vector<double> q(n);
  const double dq = two_pi / (static_cast<double>(n) * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = static_cast<double>(i) - (i < (n + 1) / 2 ? 0.0 : static_cast<double>(n));
    q[i] = m * dq;
  }
  return q;
}

/// Largest q²/2k on the grid, i.e. the phase per metre at the grid corner.
inline double max_kernel_rate(const TransverseGrid& g, double wavelength) {
  const double k = two_pi / wavelength;
  const double qx = pi / g.dx, qy = pi / g.dy;
  return (qx * qx + qy * qy) / (2.0 * k);
}

/// Longest step satisfying the aliasing criterion max q² dz / 2k < π.
inline double max_free_step(const TransverseGrid& g, double wavelength) {
  return pi / max_kernel_rate(g, wavelength);
}

/// q-space phase table e^{−i q² dz / 2k} in FFT order (row-major, y-major).
inline std::vector<cdouble> free_kernel(const TransverseGrid& g, double wavelength,
                                        double dz) {
  const double k = two_pi / wavelength;
  const auto qx = fft_wavenumbers(g.nx, g.dx);
  const auto qy = fft_wavenumbers(g.ny, g.dy);
  std::vector<cdouble> h(g.size());
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double q2 = qx[i] * qx[i] + qy[j] * qy[j];
      h[j * g.nx + i] = std::polar(1.0, -q2 * dz / (2.0 * k));
    }
  return h;
}

/// Multiply `data` (real-space, row-major) by a q-space table in place.
inline void apply_q_phase(std::span<cdouble> data, const TransverseGrid& g,
                          std::span<const cdouble> table) {
  fft::transform_2d(data, g.ny, g.nx, fft::Direction::forward);
  const double inv = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= table[i] * inv;
  fft::transform_2d(data, g.ny, g.nx, fft::Direction::backward);
}

/// One free-space step of length dz.  Throws StepSizeError if the step
/// violates the aliasing criterion.
inline TransverseField free_kernel_step(const TransverseField& f, double dz) {
  f.grid.validate();
  require(f.wavelength > 0.0, "field wavelength must be > 0");
  require(std::isfinite(dz), "step must be finite");
  if (std::abs(dz) * max_kernel_rate(f.grid, f.wavelength) >= pi)
    throw StepSizeError("free-space step violates the aliasing criterion max q²dz/2k < π");
  TransverseField out = f;
  out.z = f.z + dz;
  if (dz == 0.0) return out;
  const auto h = free_kernel(f.grid, f.wavelength, dz);
  apply_q_phase(out.samples, f.grid, h);
  return out;
}

/// Free propagation over `distance`, split into the fewest equal steps that
/// satisfy the aliasing criterion.
inline TransverseField free_propagate(const TransverseField& f, double distance) {
  const double smax = 0.5 * max_free_step(f.grid, f.wavelength);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(distance) / smax)));
  TransverseField out = f;
  const double dz = distance / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) out = free_kernel_step(out, dz);
  out.z = f.z + distance;
  return out;
}

// ---------------------------------------------------------------------------
// Homogeneous medium: separable solution
// ---------------------------------------------------------------------------

struct SeparableOutput {
  TransverseField transverse; // free-space propagated profile at z = L
  TemporalPulse temporal;     // temporal envelope after the comb
};

/// Output of a homogeneous comb medium for the input u0(r⊥)·E(t); the full
/// field is the outer product transverse ⊗ temporal.
inline SeparableOutput propagate_homogeneous(const TransverseField& f0,
                                             const SpectralPulse& temporal,
                                             const MediumSpec& medium) {
  medium.validate();
  SeparableOutput out;
  out.transverse = free_propagate(f0, medium.length);
  out.temporal = to_time(propagate(temporal, medium), reciprocal_time_grid(temporal.grid()));
  return out;
}

/// Storage figures of merit for a separable output.  The spatio-temporal
/// fidelity factorizes into the transverse mode overlap of the output with
/// the input profile and the temporal echo fidelity; the efficiency carries
/// the transverse energy ratio (1 for lossless diffraction).
inline MemoryReport analyze_separable(const TransverseField& in_profile,
                                      const SpectralPulse& in_temporal,
                                      const SeparableOutput& out, double delta_nominal,
                                      const EchoSearch& search = {}) {
  const auto tin = to_time(in_temporal, reciprocal_time_grid(in_temporal.grid()));
  MemoryReport r = analyze_storage(std::span(&tin, 1), std::span(&out.temporal, 1),
                                   delta_nominal, search);
  const double e_in = field_energy(in_profile);
  const double e_out = field_energy(out.transverse);
  require(e_in > 0.0, "input transverse profile has zero energy");
  const double mode = std::norm(overlap(in_profile, out.transverse)) / (e_in * e_out);
  r.efficiency *= e_out / e_in;
  r.fidelity *= mode;
  return r;
}

} // namespace iafc
