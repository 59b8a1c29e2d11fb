// comb.hpp
// --------
// Frequency comb of inhomogeneously broadened absorbers and the complex
// transfer function of the medium.
//
// A tooth with detuning Δ, weight w and linewidth γ contributes
//
//     w / ( i(Δ + ω) + γ/2 )
//
// to the transfer function 𝒟(ω), where ω is the field's offset from the
// carrier.  A tooth therefore absorbs at ω = −Δ.  For a single tooth the line
// centre amplitude attenuation over a length L is e^{−2wL/γ}.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/grid.hpp"
#include "iafc/core/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace iafc {

using cdouble = std::complex<double>;

struct CombTooth {
  double detuning = 0.0;  // rad/s
  double weight = 0.0;    // coupling-density product, s^-1 m^-1
  double linewidth = 0.0; // γ, rad/s (full width of |1/(iω+γ/2)|²)

  /// Field offset at which this tooth is resonant.
  double resonance() const { return -detuning; }
};

/// An ordered set of teeth.  Weights are non-negative and linewidths positive;
/// both are validated on construction.
class FrequencyComb {
 public:
  FrequencyComb() = default;
  explicit FrequencyComb(std::vector<CombTooth> teeth) : teeth_(std::move(teeth)) {
    for (std::size_t i = 0; i < teeth_.size(); ++i) validate(teeth_[i], i);
  }

  const std::vector<CombTooth>& teeth() const { return teeth_; }
  std::size_t size() const { return teeth_.size(); }
  bool empty() const { return teeth_.empty(); }
  const CombTooth& operator[](std::size_t i) const { return teeth_[i]; }

  void add(const CombTooth& t) {
    validate(t, teeth_.size());
    teeth_.push_back(t);
  }

  /// Copy with every weight multiplied by `s` (s ≥ 0).
  FrequencyComb scaled(double s) const {
    require(s >= 0.0 && std::isfinite(s), "weight scale must be finite and >= 0");
    FrequencyComb out = *this;
    for (auto& t : out.teeth_) t.weight *= s;
    return out;
  }

  /// Copy with every detuning offset by `d`.
  FrequencyComb shifted(double d) const {
    FrequencyComb out = *this;
    for (auto& t : out.teeth_) t.detuning += d;
    return out;
  }

  double min_resonance() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& t : teeth_) m = std::min(m, t.resonance());
    return m;
  }
  double max_resonance() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& t : teeth_) m = std::max(m, t.resonance());
    return m;
  }
  double span() const { return empty() ? 0.0 : max_resonance() - min_resonance(); }
  double center() const {
    return empty() ? 0.0 : 0.5 * (max_resonance() + min_resonance());
  }
  double min_linewidth() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& t : teeth_) m = std::min(m, t.linewidth);
    return m;
  }
  double max_weight() const {
    double m = 0.0;
    for (const auto& t : teeth_) m = std::max(m, t.weight);
    return m;
  }

 private:
  static void validate(const CombTooth& t, std::size_t i) {
    const std::string where = "comb tooth " + std::to_string(i) + ": ";
    require(std::isfinite(t.detuning), where + "detuning must be finite");
    require(std::isfinite(t.weight) && t.weight >= 0.0,
            where + "weight must be finite and >= 0");
    require(std::isfinite(t.linewidth) && t.linewidth > 0.0,
            where + "linewidth must be finite and > 0");
  }

  std::vector<CombTooth> teeth_;
};

/// A comb filling a medium of length L (metres).
struct MediumSpec {
  FrequencyComb comb;
  double length = 0.0;

  void validate() const {
    require(std::isfinite(length) && length > 0.0, "medium length must be > 0");
  }
};

/// Weight giving single-tooth line-centre optical depth `od` (amplitude
/// exponent 2wL/γ = od) for linewidth γ and length L.
inline double weight_for_optical_depth(double od, double gamma, double length) {
  require(od >= 0.0 && gamma > 0.0 && length > 0.0,
          "optical depth, linewidth and length must be positive");
  return od * gamma / (2.0 * length);
}

inline double optical_depth(double weight, double gamma, double length) {
  return 2.0 * weight * length / gamma;
}

/// Weight giving comb-averaged intensity optical depth `d0` for teeth spaced
/// by `delta`: each Lorentzian tooth contributes π·w to ∫Re𝒟 dω, so the mean
/// intensity exponent over one period is 2πwL/Δ = d0.
inline double weight_for_mean_optical_depth(double d0, double delta, double length) {
  require(d0 >= 0.0 && delta > 0.0 && length > 0.0,
          "optical depth, spacing and length must be positive");
  return d0 * delta / (two_pi * length);
}

/// n equally weighted teeth spaced by `delta`, centred on zero detuning.
inline FrequencyComb make_ideal_comb(int n, double delta, double gamma,
                                     double weight) {
  require(n >= 1, "ideal comb needs at least one tooth");
  require(std::isfinite(delta) && delta > 0.0, "tooth spacing must be > 0");
  std::vector<CombTooth> teeth;
  teeth.reserve(static_cast<std::size_t>(n));
  const double mid = 0.5 * static_cast<double>(n - 1);
  for (int k = 0; k < n; ++k)
    teeth.push_back({(static_cast<double>(k) - mid) * delta, weight, gamma});
  return FrequencyComb(std::move(teeth));
}

/// 𝒟(ω) for a single frequency.
inline cdouble transfer_function(const FrequencyComb& comb, double omega) {
  cdouble d{0.0, 0.0};
  for (const auto& t : comb.teeth())
    d += t.weight / cdouble(0.5 * t.linewidth, t.detuning + omega);
  return d;
}

/// 𝒟(ω_j) on every point of a frequency grid.
inline std::vector<cdouble> transfer_on_grid(const FrequencyComb& comb,
                                             const FrequencyGrid& grid) {
  std::vector<cdouble> d(grid.n, cdouble{0.0, 0.0});
  for (const auto& t : comb.teeth()) {
    if (t.weight == 0.0) continue;
    const double g2 = 0.5 * t.linewidth;
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double x = t.detuning + grid.omega(j);
      // w / (g2 + i x) = w (g2 − i x) / (g2² + x²)
      const double s = t.weight / (g2 * g2 + x * x);
      d[j] += cdouble(s * g2, -s * x);
    }
  }
  return d;
}

/// Resolution/coverage check of a spectral grid against a comb.  Teeth outside
/// the grid only produce a warning (their smooth tails are still included in
/// 𝒟); a grid that resolves no tooth at all, or whose step exceeds the
/// narrowest linewidth, raises CoverageError.
inline void check_coverage(const FrequencyComb& comb, const FrequencyGrid& grid) {
  if (comb.empty() || comb.max_weight() == 0.0) return;
  std::size_t outside = 0;
  for (const auto& t : comb.teeth())
    if (t.weight > 0.0 && !grid.contains(t.resonance())) ++outside;
  std::size_t active = 0;
  for (const auto& t : comb.teeth()) active += t.weight > 0.0 ? 1 : 0;
  if (outside == active)
    throw CoverageError("spectral grid covers none of the comb's teeth");
  if (grid.domega > comb.min_linewidth())
    throw CoverageError("spectral grid step exceeds the narrowest tooth linewidth");
  if (outside > 0)
    warn(std::to_string(outside) + " comb teeth lie outside the spectral grid");
}

/// Median spacing of the strong teeth (weight ≥ `threshold` × max weight).
/// This is the nominal tooth spacing used to locate the first echo.
inline double nominal_spacing(const FrequencyComb& comb, double threshold = 0.3) {
  std::vector<double> pos;
  const double wmax = comb.max_weight();
  for (const auto& t : comb.teeth())
    if (t.weight >= threshold * wmax && t.weight > 0.0) pos.push_back(t.resonance());
  std::sort(pos.begin(), pos.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < pos.size(); ++i)
    if (pos[i] - pos[i - 1] > 0.0) gaps.push_back(pos[i] - pos[i - 1]);
  require(!gaps.empty(), "comb needs at least two distinct strong teeth to "
                         "define a spacing");
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return gaps[gaps.size() / 2];
}

} // namespace iafc
