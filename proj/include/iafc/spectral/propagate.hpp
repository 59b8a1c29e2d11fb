// propagate.hpp
// -------------
// Linear propagation through the comb medium.  In the frame moving with the
// pulse (retarded time τ = t − z/c) every spectral component is simply
// attenuated and phase shifted:  Ẽ(L, ω) = e^{−𝒟(ω) L} Ẽ(0, ω).
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/units.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/spectral/pulse.hpp"

#include <cmath>
#include <complex>

namespace iafc {

enum class Frame {
  retarded,   // τ = t − z/c; the vacuum transit delay is removed
  laboratory, // includes the vacuum delay L/c as a linear spectral phase
};

/// Apply exp(−scale·L·𝒟) (times the vacuum delay if requested) in place,
/// given a precomputed L·𝒟 on the pulse's grid.
inline void apply_transfer(std::span<cdouble> spectrum,
                           std::span<const cdouble> lD, double scale = 1.0) {
  require(spectrum.size() == lD.size(), "transfer/spectrum size mismatch");
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    if (spectrum[j] == cdouble{0.0, 0.0}) continue;
    spectrum[j] *= std::exp(-scale * lD[j]);
  }
}

inline SpectralPulse propagate(const SpectralPulse& in, const MediumSpec& medium,
                               Frame frame = Frame::retarded) {
  medium.validate();
  require(in.size() > 0 && in.domega > 0.0, "cannot propagate an empty pulse");
  const auto grid = in.grid();
  check_coverage(medium.comb, grid);
  auto d = transfer_on_grid(medium.comb, grid);
  SpectralPulse out = in;
  for (std::size_t j = 0; j < out.size(); ++j) {
    cdouble exponent = -d[j] * medium.length;
    if (frame == Frame::laboratory)
      exponent += cdouble(0.0, -grid.omega(j) * medium.length /
                                   constants::speed_of_light);
    out.samples[j] *= std::exp(exponent);
    if (!std::isfinite(out.samples[j].real()) || !std::isfinite(out.samples[j].imag()))
      throw NumericalInstability("non-finite value after propagation");
  }
  return out;
}

inline TemporalPulse propagate(const TemporalPulse& in, const MediumSpec& medium,
                               Frame frame = Frame::retarded) {
  require(in.size() > 0 && in.dt > 0.0, "cannot propagate an empty pulse");
  FourierPair fp(in.grid(), reciprocal_frequency_grid(in.grid()));
  return fp.to_time(propagate(fp.to_freq(in), medium, frame));
}

} // namespace iafc
