// transitions.hpp
// ---------------
// Electric-dipole couplings between the Zeeman eigenstates of a ground and an
// excited level.  The dipole operator acts on the electronic angular momentum
// only; in the uncoupled basis
//
//     ⟨J_e m_J'| d_q |J_g m_J⟩ = (−1)^{J_e − m_J'} (J_e 1 J_g; −m_J' q m_J)
//
// times the reduced matrix element, which is normalized to 1, with m_I
// unchanged.  Eigenstates carry definite m, so each pair couples through at
// most one spherical component q = m_e − m_g.
#pragma once

#include "iafc/atoms/hyperfine.hpp"
#include "iafc/core/error.hpp"

#include <gsl/gsl_sf_coupling.h>

#include <cmath>
#include <cstdlib>
#include <vector>

namespace iafc {

struct Transition {
  std::size_t ground = 0;  // eigenstate index in the ground manifold
  std::size_t excited = 0; // eigenstate index in the excited manifold
  int q = 0;               // spherical component, m_e − m_g
  double frequency = 0.0;  // E_e − E_g relative to the unperturbed line, rad/s
  double amplitude = 0.0;  // ⟨e|d_q|g⟩ (real)
  double strength = 0.0;   // amplitude²
};

/// ⟨J_e m_J'| d_q |J_g m_J⟩ with unit reduced matrix element.
inline double electronic_dipole(int two_je, int two_mje, int two_jg, int two_mjg, int q) {
  if (two_mje != two_mjg + 2 * q) return 0.0;
  const double w = gsl_sf_coupling_3j(two_je, 2, two_jg, -two_mje, 2 * q, two_mjg);
  const int phase2 = two_je - two_mje; // 2(J_e − m_J') is even
  return ((phase2 / 2) % 2 == 0 ? 1.0 : -1.0) * w;
}

/// All couplings with spherical component q ∈ {−1, 0, +1} whose strength
/// exceeds `cutoff`.
inline std::vector<Transition> transition_dipoles(const ZeemanManifold& ground,
                                                  const ZeemanManifold& excited, int q,
                                                  double cutoff = 1e-14) {
  const LevelSpec& g = ground.level;
  const LevelSpec& e = excited.level;
  require(q >= -1 && q <= 1, "dipole component q must be -1, 0 or +1");
  require(g.two_i == e.two_i, "ground and excited levels must share the nuclear spin");
  require(std::abs(g.two_j - e.two_j) <= 2 && g.two_j + e.two_j >= 2,
          "levels are not connected by an electric-dipole transition");

  // Dipole matrix in the uncoupled bases, then rotate into the eigenbases.
  const auto ng = static_cast<Eigen::Index>(g.dimension());
  const auto ne = static_cast<Eigen::Index>(e.dimension());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(ne, ng);
  for (Eigen::Index c = 0; c < ng; ++c) {
    const int tmi = g.two_mi(static_cast<std::size_t>(c));
    const int tmj = g.two_mj(static_cast<std::size_t>(c));
    const int tmj_e = tmj + 2 * q;
    if (std::abs(tmj_e) > e.two_j) continue;
    d(static_cast<Eigen::Index>(e.index(tmi, tmj_e)), c) =
        electronic_dipole(e.two_j, tmj_e, g.two_j, tmj, q);
  }
  const Eigen::MatrixXd amp = excited.states.transpose() * d * ground.states;

  std::vector<Transition> out;
  for (Eigen::Index ig = 0; ig < ng; ++ig)
    for (Eigen::Index ie = 0; ie < ne; ++ie) {
      const double a = amp(ie, ig);
      if (a * a <= cutoff) continue;
      out.push_back({static_cast<std::size_t>(ig), static_cast<std::size_t>(ie), q,
                     excited.energies[static_cast<std::size_t>(ie)] -
                         ground.energies[static_cast<std::size_t>(ig)],
                     a, a * a});
    }
  return out;
}

} // namespace iafc
