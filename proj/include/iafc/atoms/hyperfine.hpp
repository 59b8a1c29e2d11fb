// hyperfine.hpp
// -------------
// Hyperfine and Zeeman structure of one fine-structure level.  The
// Hamiltonian in the uncoupled basis |m_I, m_J⟩ is
//
//     H = A I·J + B Q(I, J) + μ_B B_z (g_J J_z + g_I I_z),
//
//     Q = [3(I·J)² + (3/2)(I·J) − I(I+1)J(J+1)] / [2I(2I−1)J(2J−1)],
//
// with Q present only when I ≥ 1 and J ≥ 1.  m = m_I + m_J commutes with H,
// so H is diagonalized block by block; every eigenstate therefore carries a
// definite m.  Angular momenta are stored doubled (2J, 2I) so that half
// integers are exact.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/core/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace iafc {

// ---------------------------------------------------------------------------
// Level specification
// ---------------------------------------------------------------------------

struct LevelSpec {
  int two_j = 1;        // 2J
  int two_i = 7;        // 2I
  double a_hfs = 0.0;   // magnetic-dipole constant, rad/s
  double b_hfs = 0.0;   // electric-quadrupole constant, rad/s
  double g_j = 2.0;
  double g_i = 0.0;

  double j() const { return 0.5 * two_j; }
  double i() const { return 0.5 * two_i; }
  std::size_t dimension() const {
    return static_cast<std::size_t>((two_j + 1) * (two_i + 1));
  }

  /// Basis index of |m_I, m_J⟩; m_I runs slowest, both from +I/+J downward.
  std::size_t index(int two_mi, int two_mj) const {
    return static_cast<std::size_t>(((two_i - two_mi) / 2) * (two_j + 1) + (two_j - two_mj) / 2);
  }
  int two_mi(std::size_t idx) const {
    return two_i - 2 * static_cast<int>(idx / static_cast<std::size_t>(two_j + 1));
  }
  int two_mj(std::size_t idx) const {
    return two_j - 2 * static_cast<int>(idx % static_cast<std::size_t>(two_j + 1));
  }

  void validate() const {
    require(two_j >= 0 && two_i >= 0, "level angular momenta J and I must be >= 0");
    for (double v : {a_hfs, b_hfs, g_j, g_i})
      require(std::isfinite(v), "level constants must be finite");
  }
};

// ---------------------------------------------------------------------------
// Hamiltonian
// ---------------------------------------------------------------------------

/// H in the |m_I, m_J⟩ basis for field `b_tesla` (rad/s).
inline Eigen::MatrixXd level_hamiltonian(const LevelSpec& s, double b_tesla) {
  s.validate();
  const auto n = static_cast<Eigen::Index>(s.dimension());
  const double I = s.i(), J = s.j();
  Eigen::MatrixXd idotj = Eigen::MatrixXd::Zero(n, n);
  auto ladder = [](double j, double m, int dir) {  // ⟨m±1|J±|m⟩
    return std::sqrt(j * (j + 1) - m * (m + dir));
  };
  for (Eigen::Index c = 0; c < n; ++c) {
    const int tmi = s.two_mi(static_cast<std::size_t>(c)), tmj = s.two_mj(static_cast<std::size_t>(c));
    const double mi = 0.5 * tmi, mj = 0.5 * tmj;
    idotj(c, c) += mi * mj;
    // ½ I₊J₋ and ½ I₋J₊
    if (tmi + 2 <= s.two_i && tmj - 2 >= -s.two_j) {
      const auto r = static_cast<Eigen::Index>(s.index(tmi + 2, tmj - 2));
      idotj(r, c) += 0.5 * ladder(I, mi, +1) * ladder(J, mj, -1);
    }
    if (tmi - 2 >= -s.two_i && tmj + 2 <= s.two_j) {
      const auto r = static_cast<Eigen::Index>(s.index(tmi - 2, tmj + 2));
      idotj(r, c) += 0.5 * ladder(I, mi, -1) * ladder(J, mj, +1);
    }
  }
  Eigen::MatrixXd h = s.a_hfs * idotj;
  if (s.two_i >= 2 && s.two_j >= 2 && s.b_hfs != 0.0) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd q =
        3.0 * idotj * idotj + 1.5 * idotj - I * (I + 1) * J * (J + 1) * id;
    h += s.b_hfs * q / (2.0 * I * (2 * I - 1) * J * (2 * J - 1));
  }
  const double mub = two_pi * constants::bohr_magneton_hz_per_tesla * b_tesla;
  for (Eigen::Index c = 0; c < n; ++c)
    h(c, c) += mub * (s.g_j * 0.5 * s.two_mj(static_cast<std::size_t>(c)) +
                      s.g_i * 0.5 * s.two_mi(static_cast<std::size_t>(c)));
  return h;
}

// ---------------------------------------------------------------------------
// Diagonalization
// ---------------------------------------------------------------------------

struct ZeemanManifold {
  LevelSpec level;
  double field = 0.0;             // Tesla
  std::vector<double> energies;   // rad/s, ascending
  Eigen::MatrixXd states;         // column k: eigenvector of energies[k]
  std::vector<int> two_m;         // 2m of each eigenstate
  std::vector<int> rank_in_block; // energy rank within its m block

  std::size_t size() const { return energies.size(); }
};

/// Eigen-decomposition of one level in field `b_tesla` ≥ 0.
inline ZeemanManifold diagonalize_level(const LevelSpec& s, double b_tesla) {
  require(std::isfinite(b_tesla) && b_tesla >= 0.0, "magnetic field must be finite and >= 0");
  const Eigen::MatrixXd h = level_hamiltonian(s, b_tesla);
  const auto n = static_cast<Eigen::Index>(s.dimension());

  std::map<int, std::vector<Eigen::Index>> blocks;
  for (Eigen::Index c = 0; c < n; ++c)
    blocks[s.two_mi(static_cast<std::size_t>(c)) + s.two_mj(static_cast<std::size_t>(c))].push_back(c);

  struct Eig {
    double energy;
    int two_m, rank;
    Eigen::VectorXd vec;
  };
  std::vector<Eig> all;
  all.reserve(static_cast<std::size_t>(n));
  for (const auto& [two_m, idx] : blocks) {
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd hb(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) hb(r, c) = h(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hb);
    if (es.info() != Eigen::Success)
      throw NumericalError("eigensolver failed for the 2m = " + std::to_string(two_m) + " block");
    for (Eigen::Index k = 0; k < d; ++k) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (Eigen::Index r = 0; r < d; ++r) v(idx[r]) = es.eigenvectors()(r, k);
      // Fix the overall sign: largest component positive.
      Eigen::Index imax = 0;
      v.cwiseAbs().maxCoeff(&imax);
      if (v(imax) < 0) v = -v;
      all.push_back({es.eigenvalues()(k), two_m, static_cast<int>(k), std::move(v)});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Eig& a, const Eig& b) {
    return a.energy < b.energy;
  });

  ZeemanManifold z;
  z.level = s;
  z.field = b_tesla;
  z.states.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& e = all[static_cast<std::size_t>(k)];
    z.energies.push_back(e.energy);
    z.two_m.push_back(e.two_m);
    z.rank_in_block.push_back(e.rank);
    z.states.col(k) = e.vec;
  }
  return z;
}

} // namespace iafc
