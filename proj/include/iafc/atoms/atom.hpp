// atom.hpp
// --------
// Atomic data and the assembly of a dual comb (σ⁺ and σ⁻ absorption combs)
// from the Zeeman-resolved transitions of one ground and one excited level.
//
// Every ground sublevel is equally populated.  A transition g → e with
// strength |d_q|² becomes a tooth of the q = ±1 comb with weight
// density_scale · ρ_gg · |d_q|², resonant at the transition frequency measured
// from the carrier.  Teeth closer than `merge_tolerance` are kept separate;
// the comb is a plain list of Lorentzians, so nearby teeth simply add.
#pragma once

#include "iafc/atoms/hyperfine.hpp"
#include "iafc/atoms/transitions.hpp"
#include "iafc/polarization/dual_comb.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace iafc {

// ---------------------------------------------------------------------------
// Atomic data
// ---------------------------------------------------------------------------

/// Constants of one ground ↔ excited transition, in the units in which they
/// are tabulated.
struct AtomData {
  std::string atom;
  int two_j_ground = 1;
  int two_j_excited = 3;
  int two_i = 7;
  double a_ground_mhz = 0.0;
  double a_excited_mhz = 0.0;
  double b_excited_mhz = 0.0;
  double gj_ground = 2.0;
  double gj_excited = 4.0 / 3.0;
  double g_i = 0.0;
  double mass_amu = 1.0;
  double lambda_nm = 500.0;

  LevelSpec ground() const {
    return {two_j_ground, two_i, mhz(a_ground_mhz), 0.0, gj_ground, g_i};
  }
  LevelSpec excited() const {
    return {two_j_excited, two_i, mhz(a_excited_mhz), mhz(b_excited_mhz), gj_excited, g_i};
  }
  double mass() const { return mass_amu * constants::atomic_mass_unit; }
  double wavelength() const { return lambda_nm * 1e-9; }

  void validate() const {
    require(!atom.empty(), "atom name must not be empty");
    ground().validate();
    excited().validate();
    require(mass_amu > 0.0 && std::isfinite(mass_amu), "atomic mass must be > 0");
    require(lambda_nm > 0.0 && std::isfinite(lambda_nm), "transition wavelength must be > 0");
  }
};

/// ¹³³Cs 6s₁/₂ ↔ 8p₃/₂.  Ground constants from the cesium D-line reference
/// data; 8p₃/₂ hyperfine constants from hyperfine-structure spectroscopy
/// compilations; g_J of 8p₃/₂ is the Landé value with the electron g-factor.
inline AtomData cesium_data() {
  return {"cs", 1, 3, 7, 2298.1579425, 7.626, -0.049, 2.00254032, 1.3340, -0.00039885395,
          132.905451933, 387.7};
}

/// ⁸⁷Rb 5s₁/₂ ↔ 6p₃/₂ (same provenance as cesium_data()).
inline AtomData rubidium87_data() {
  return {"rb87", 1, 3, 3, 3417.341305452, 27.700, 3.953, 2.00233113, 1.3362, -0.0009951414,
          86.909180527, 420.3};
}

/// Built-in data by name: "cs" or "rb" / "rb87".
inline AtomData builtin_atom(const std::string& name) {
  if (name == "cs") return cesium_data();
  if (name == "rb" || name == "rb87") return rubidium87_data();
  throw InvalidArgument("unsupported atom '" + name + "' (expected cs or rb)");
}

// ---------------------------------------------------------------------------
// Dual comb assembly
// ---------------------------------------------------------------------------

/// Which ground hyperfine manifold contributes teeth.  The manifolds lie
/// several GHz apart, far outside any pulse bandwidth considered here, so by
/// default only the upper one (largest F) is kept; populations are still
/// spread over all ground sublevels.
enum class GroundManifold { all, upper, lower };

struct AtomicCombOptions {
  double linewidth = 5e6;       // γ shared by all teeth, rad/s
  GroundManifold manifold = GroundManifold::upper;
  double min_strength = 1e-6;   // drop teeth weaker than this fraction of the strongest
  bool center_carrier = true;   // carrier at the midpoint of the two combs' centroids
  double carrier_offset = 0.0;  // extra carrier offset from that reference, rad/s
};

struct AtomicDualComb {
  DualComb combs;
  std::vector<Transition> plus, minus; // transitions kept, in tooth order
  double carrier = 0.0; // carrier frequency relative to the unperturbed line, rad/s
  ZeemanManifold ground, excited;
};

/// Strength-weighted mean frequency of a set of transitions.
inline double transition_centroid(const std::vector<Transition>& t) {
  double sw = 0.0, s = 0.0;
  for (const auto& x : t) {
    sw += x.strength * x.frequency;
    s += x.strength;
  }
  require(s > 0.0, "no transitions to average");
  return sw / s;
}

/// Dual comb for `atom` in field `b_tesla` > 0.  By default the carrier sits
/// midway between the strength-weighted centroids of the σ⁺ and σ⁻ teeth.
inline AtomicDualComb make_atomic_dual_comb(const AtomData& atom, double b_tesla,
                                            double density_scale,
                                            const AtomicCombOptions& opt = {}) {
  atom.validate();
  require(std::isfinite(b_tesla) && b_tesla > 0.0, "magnetic field must be > 0");
  require(std::isfinite(density_scale) && density_scale > 0.0, "density scale must be > 0");
  require(opt.linewidth > 0.0 && std::isfinite(opt.linewidth), "linewidth must be > 0");

  AtomicDualComb out;
  out.ground = diagonalize_level(atom.ground(), b_tesla);
  out.excited = diagonalize_level(atom.excited(), b_tesla);
  // Ground hyperfine manifolds are separated at the midpoint of the spectrum.
  const double split = 0.5 * (out.ground.energies.front() + out.ground.energies.back());
  auto in_manifold = [&](const Transition& x) {
    const bool up = out.ground.energies[x.ground] > split;
    return opt.manifold == GroundManifold::all || (opt.manifold == GroundManifold::upper) == up;
  };
  auto keep = [&](int q) {
    auto t = transition_dipoles(out.ground, out.excited, q);
    std::erase_if(t, [&](const Transition& x) { return !in_manifold(x); });
    double smax = 0.0;
    for (const auto& x : t) smax = std::max(smax, x.strength);
    std::erase_if(t, [&](const Transition& x) { return x.strength < opt.min_strength * smax; });
    std::sort(t.begin(), t.end(),
              [](const Transition& a, const Transition& b) { return a.frequency < b.frequency; });
    return t;
  };
  out.plus = keep(+1);
  out.minus = keep(-1);

  require(!out.plus.empty() && !out.minus.empty(),
          "selected ground manifold has no sigma+ or sigma- transitions");
  if (opt.center_carrier)
    out.carrier = 0.5 * (transition_centroid(out.plus) + transition_centroid(out.minus));
  out.carrier += opt.carrier_offset;

  const double rho = 1.0 / static_cast<double>(out.ground.size());
  auto comb = [&](const std::vector<Transition>& t) {
    std::vector<CombTooth> teeth;
    teeth.reserve(t.size());
    for (const auto& x : t)
      teeth.push_back({-(x.frequency - out.carrier), density_scale * rho * x.strength, opt.linewidth});
    return FrequencyComb(std::move(teeth));
  };

  // Cross teeth: transitions coupling one pair through both q = ±1.
  std::vector<CrossTooth> cross;
  for (const auto& p : out.plus)
    for (const auto& m : out.minus)
      if (p.ground == m.ground && p.excited == m.excited)
        cross.push_back({-(p.frequency - out.carrier), density_scale * rho * p.amplitude * m.amplitude});
  out.combs = DualComb(comb(out.plus), comb(out.minus), std::move(cross));
  return out;
}

/// Comb-averaged intensity optical depth 2πL·w̄/Δ over the teeth with weight
/// ≥ `threshold` × max, with w̄ their mean weight and Δ their median spacing.
/// For an ideal comb this is the usual mean optical depth.
inline double mean_optical_depth(const FrequencyComb& comb, double length,
                                 double threshold = 0.3) {
  const double delta = nominal_spacing(comb, threshold);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : comb.teeth())
    if (t.weight >= threshold * comb.max_weight() && t.weight > 0.0) {
      sum += t.weight;
      ++n;
    }
  return two_pi * length * (sum / static_cast<double>(n)) / delta;
}

} // namespace iafc
