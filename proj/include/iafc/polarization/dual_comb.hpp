// dual_comb.hpp
// -------------
// Two combs driving the two circular polarization components (σ⁺ and σ⁻
// transitions) plus an optional cross term 𝒢 that mixes them.  With field
// vector (E₊, E₋) the retarded-frame propagation equation is
//
//     ∂_z Ẽ = A(ω) Ẽ,     A = −[[𝒟⁺, 𝒢], [𝒢, 𝒟⁻]],
//
// solved per frequency by the closed-form 2×2 matrix exponential.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/spectral/comb.hpp"
#include "iafc/spectral/pulse.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace iafc {

/// Cross-coupling tooth: a transition that couples to both polarizations with
/// dipole product `weight` (may be negative).
struct CrossTooth {
  double detuning = 0.0; // rad/s
  double weight = 0.0;   // s^-1 m^-1
};

class DualComb {
 public:
  DualComb() = default;
  DualComb(FrequencyComb plus, FrequencyComb minus, std::vector<CrossTooth> cross = {},
           double shift = 0.0)
      : plus_(std::move(plus)), minus_(std::move(minus)), cross_(std::move(cross)),
        shift_(shift) {
    validate();
  }

  /// Unshifted combs as constructed.
  const FrequencyComb& base_plus() const { return plus_; }
  const FrequencyComb& base_minus() const { return minus_; }
  const std::vector<CrossTooth>& cross_teeth() const { return cross_; }
  double shift() const { return shift_; }
  double linewidth() const { return gamma_; }

  /// Combs with the relative displacement applied (+λ/2 and −λ/2 detuning).
  FrequencyComb comb_plus() const { return plus_.shifted(0.5 * shift_); }
  FrequencyComb comb_minus() const { return minus_.shifted(-0.5 * shift_); }

  DualComb with_shift(double lambda) const {
    DualComb d = *this;
    d.shift_ = lambda;
    require(std::isfinite(lambda), "comb shift must be finite");
    return d;
  }

  DualComb scaled(double s) const {
    DualComb d = *this;
    d.plus_ = plus_.scaled(s);
    d.minus_ = minus_.scaled(s);
    for (auto& c : d.cross_) c.weight *= s;
    return d;
  }

  bool has_cross() const {
    for (const auto& c : cross_)
      if (c.weight != 0.0) return true;
    return false;
  }

  /// All resonances of both shifted combs (for grid sizing).
  FrequencyComb union_comb() const {
    FrequencyComb u = comb_plus();
    const FrequencyComb m = comb_minus();
    for (const auto& t : m.teeth()) u.add(t);
    return u;
  }

 private:
  void validate() {
    require(std::isfinite(shift_), "comb shift must be finite");
    require(!plus_.empty() || !minus_.empty(), "dual comb needs at least one tooth");
    gamma_ = plus_.empty() ? minus_[0].linewidth : plus_[0].linewidth;
    for (const auto* c : {&plus_, &minus_})
      for (const auto& t : c->teeth())
        require(std::abs(t.linewidth - gamma_) <= 1e-12 * gamma_,
                "both combs of a dual comb must share one linewidth");
    auto weight_at = [](const FrequencyComb& c, double det) {
      for (const auto& t : c.teeth())
        if (std::abs(t.detuning - det) <= 1e-9 * std::max(1.0, std::abs(det)))
          return t.weight;
      return -1.0;
    };
    for (std::size_t i = 0; i < cross_.size(); ++i) {
      const auto& c = cross_[i];
      require(std::isfinite(c.weight) && std::isfinite(c.detuning),
              "cross tooth " + std::to_string(i) + " must be finite");
      if (c.weight == 0.0) continue;
      const double wp = weight_at(plus_, c.detuning), wm = weight_at(minus_, c.detuning);
      require(wp >= 0.0 && wm >= 0.0,
              "cross tooth " + std::to_string(i) +
                  " has no matching tooth in both combs at its detuning");
      require(c.weight * c.weight <= wp * wm * (1.0 + 1e-12),
              "cross tooth " + std::to_string(i) +
                  " violates |cross|^2 <= plus*minus (Cauchy-Schwarz)");
    }
  }

  FrequencyComb plus_, minus_;
  std::vector<CrossTooth> cross_;
  double shift_ = 0.0;
  double gamma_ = 0.0;
};

/// 𝒢(ω) from the cross teeth (unshifted: a shared transition has one position).
inline cdouble cross_transfer(const DualComb& dc, double omega) {
  cdouble g{0.0, 0.0};
  const double g2 = 0.5 * dc.linewidth();
  for (const auto& c : dc.cross_teeth())
    g += c.weight / cdouble(g2, c.detuning + omega);
  return g;
}

/// A(ω) = −[[𝒟⁺, 𝒢], [𝒢, 𝒟⁻]]  (1/m).
inline Eigen::Matrix2cd dual_transfer_matrix(const DualComb& dc, double omega) {
  Eigen::Matrix2cd a;
  const cdouble g = cross_transfer(dc, omega);
  a(0, 0) = -transfer_function(dc.comb_plus(), omega);
  a(1, 1) = -transfer_function(dc.comb_minus(), omega);
  a(0, 1) = -g;
  a(1, 0) = -g;
  return a;
}

/// exp(A) for a 2×2 complex matrix:  with m = tr A/2 and s² = m² − det A,
///   e^A = e^m [cosh(s) I + sinh(s)/s (A − mI)],
/// evaluated as (e^{m+s} ± e^{m−s})/2 to avoid overflow of cosh for strongly
/// absorbing media; both factors are even in s, so the branch of √ is irrelevant.
inline Eigen::Matrix2cd expm2(const Eigen::Matrix2cd& a) {
  if (a(0, 1) == cdouble{0.0, 0.0} && a(1, 0) == cdouble{0.0, 0.0}) {
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
    d(0, 0) = std::exp(a(0, 0));
    d(1, 1) = std::exp(a(1, 1));
    return d;
  }
  const cdouble m = 0.5 * (a(0, 0) + a(1, 1));
  const cdouble det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const cdouble s = std::sqrt(m * m - det);
  cdouble c, sh; // e^m cosh s,  e^m sinh(s)/s
  if (std::abs(s) < 1e-6) {
    const cdouble em = std::exp(m), s2 = s * s;
    c = em * (1.0 + s2 / 2.0 + s2 * s2 / 24.0);
    sh = em * (1.0 + s2 / 6.0 + s2 * s2 / 120.0);
  } else {
    const cdouble ep = std::exp(m + s), en = std::exp(m - s);
    c = 0.5 * (ep + en);
    sh = 0.5 * (ep - en) / s;
  }
  Eigen::Matrix2cd r;
  r(0, 0) = c + sh * (a(0, 0) - m);
  r(1, 1) = c + sh * (a(1, 1) - m);
  r(0, 1) = sh * a(0, 1);
  r(1, 0) = sh * a(1, 0);
  return r;
}

} // namespace iafc
