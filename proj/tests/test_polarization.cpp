// Tests for dual-comb polarization storage.

#include "iafc/polarization/dual_comb.hpp"
#include "iafc/polarization/vector.hpp"
#include "support.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>

using namespace iafc;
using iafc::test::rel_l2;
using iafc::test::uniform;

namespace {
const double kDelta = ghz(0.4);
const double kGamma = 5e6;
const double kL = 0.01;
const double kW320 = weight_for_optical_depth(320, kGamma, kL);

DualComb identical_dual(int n, double w = kW320) {
  const auto c = make_ideal_comb(n, kDelta, kGamma, w);
  return DualComb(c, c);
}
} // namespace

TEST(DualTransfer, IdenticalCombsGiveScalarMultipleOfIdentity) {
  const auto dc = identical_dual(11);
  for (double w : {0.0, ghz(0.13), -ghz(1.7)}) {
    const auto a = dual_transfer_matrix(dc, w);
    const auto d = transfer_function(make_ideal_comb(11, kDelta, kGamma, kW320), w);
    EXPECT_LT(std::abs(a(0, 0) + d), 1e-12 * std::abs(d));
    EXPECT_EQ(a(0, 0), a(1, 1));
    EXPECT_EQ(a(0, 1), cdouble(0.0));
    EXPECT_EQ(a(1, 0), cdouble(0.0));
  }
}

TEST(DualTransfer, EmptyMinusCombPassesMinusUntouched) {
  const DualComb dc(make_ideal_comb(5, kDelta, kGamma, kW320), FrequencyComb{});
  const auto a = dual_transfer_matrix(dc, ghz(0.2));
  EXPECT_EQ(a(1, 1), cdouble(0.0));
  const auto fg = make_spectral_grid({0.0, ghz(1.6), ghz(0.5), kGamma});
  const auto s = gaussian_spectrum(fg, {ghz(0.5), 0.0});
  const auto out = propagate_vector({s, s}, dc, kL);
  EXPECT_EQ(out.minus.samples, s.samples);
}

// Oracle: numerical eigen-decomposition of the symmetric cross-coupled case.
TEST(DualTransfer, SymmetricCrossCouplingEigenvectors) {
  const auto c = make_ideal_comb(3, kDelta, kGamma, 1e8);
  std::vector<CrossTooth> cross;
  for (const auto& t : c.teeth()) cross.push_back({t.detuning, 0.6e8});
  const DualComb dc(c, c, cross);
  const auto a = dual_transfer_matrix(dc, ghz(0.05));
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(a);
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2cd v = es.eigenvectors().col(k);
    v /= v(0);
    EXPECT_NEAR(std::abs(v(1)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(v(1).imag()), 0.0, 1e-12);
  }
  // Hand diagonalization: eigenvalues −𝒟 ∓ 𝒢.
  const cdouble d = -a(0, 0), g = -a(0, 1);
  const auto ev = es.eigenvalues();
  const bool order = std::abs(ev(0) + d + g) < std::abs(ev(0) + d - g);
  EXPECT_LT(std::abs(ev(order ? 0 : 1) + d + g), 1e-9 * std::abs(d));
  EXPECT_LT(std::abs(ev(order ? 1 : 0) + d - g), 1e-9 * std::abs(d));
}

TEST(DualTransfer, CauchySchwarzValidation) {
  const auto c = make_ideal_comb(3, kDelta, kGamma, 1e8);
  EXPECT_THROW(DualComb(c, c, {{0.0, 1.01e8}}), InvalidArgument);
  EXPECT_THROW(DualComb(c, c, {{ghz(0.123), 1e7}}), InvalidArgument);
  EXPECT_NO_THROW(DualComb(c, c, {{0.0, -1e8}}));
  EXPECT_THROW(DualComb(c, make_ideal_comb(3, kDelta, 2 * kGamma, 1e8)), InvalidArgument);
}

TEST(DualTransfer, HermitianPartNegativeSemidefiniteProperty) {
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CombTooth> p, m;
    std::vector<CrossTooth> x;
    for (int i = 0; i < 5; ++i) {
      const double det = ghz(uniform(-2, 2));
      const double wp = uniform(0, 1e9), wm = uniform(0, 1e9);
      p.push_back({det, wp, kGamma});
      m.push_back({det, wm, kGamma});
      x.push_back({det, uniform(-1, 1) * std::sqrt(wp * wm)});
    }
    const DualComb dc{FrequencyComb(p), FrequencyComb(m), x};
    for (int k = 0; k < 20; ++k) {
      const auto a = dual_transfer_matrix(dc, ghz(uniform(-3, 3)));
      const Eigen::Matrix2cd h = 0.5 * (a + a.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
      EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-9 * h.norm());
    }
  }
}

// Oracle: Eigen's Padé-based matrix exponential.
TEST(MatrixExponential, ClosedFormMatchesPade) {
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix2cd a;
    for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = cdouble(uniform(-8, 3), uniform(-8, 8));
    const Eigen::Matrix2cd ref = a.exp();
    EXPECT_LT((expm2(a) - ref).norm(), 1e-11 * std::max(1.0, ref.norm()));
  }
  // Degenerate (defective) matrix: s = 0.
  Eigen::Matrix2cd j;
  j << cdouble(-1, 0.5), 1.0, 0.0, cdouble(-1, 0.5);
  EXPECT_LT((expm2(j) - j.exp()).norm(), 1e-13);
}

TEST(MatrixExponential, DiagonalIsElementwise) {
  Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero();
  a(0, 0) = cdouble(-3.5, 2.0);
  a(1, 1) = cdouble(-0.25, -7.0);
  const auto e = expm2(a);
  EXPECT_LT(std::abs(e(0, 0) - std::exp(a(0, 0))), 1e-15);
  EXPECT_LT(std::abs(e(1, 1) - std::exp(a(1, 1))), 1e-15);
  EXPECT_EQ(e(0, 1), cdouble(0.0));
  // Strong absorption must not overflow.
  a(0, 0) = -2000.0;
  const auto big = expm2(a);
  EXPECT_TRUE(std::isfinite(big(1, 1).real()));
  EXPECT_EQ(big(0, 0), cdouble(0.0));
}

TEST(PropagateVector, BlockDiagonalReducesToScalar) {
  const auto cp = make_ideal_comb(9, kDelta, kGamma, kW320);
  const auto cm = make_ideal_comb(7, kDelta, kGamma, 0.5 * kW320).shifted(ghz(0.1));
  const DualComb dc(cp, cm, {}, ghz(0.3));
  const auto fg = grid_for_comb(dc.union_comb(), ghz(0.5));
  const auto s = gaussian_spectrum(fg, {ghz(0.5), 0.0});
  const auto out = propagate_vector({s, s}, dc, kL);
  const auto sp = propagate(s, {dc.comb_plus(), kL});
  const auto sm = propagate(s, {dc.comb_minus(), kL});
  for (std::size_t j = 0; j < fg.n; ++j) {
    EXPECT_LE(std::abs(out.plus.samples[j] - sp.samples[j]), 1e-12 * std::abs(s.samples[j]) + 1e-300);
    EXPECT_LE(std::abs(out.minus.samples[j] - sm.samples[j]), 1e-12 * std::abs(s.samples[j]) + 1e-300);
  }
}

TEST(VectorFidelity, DelayedCopySwappedAndPhase) {
  const auto fg = make_spectral_grid({0.0, ghz(3.2), ghz(1.0), kGamma});
  const auto tg = reciprocal_time_grid(fg);
  const auto e = to_time(gaussian_spectrum(fg, {ghz(1.0), 0.0}), tg);
  TemporalPulse zero{tg.t0, tg.dt, std::vector<cdouble>(tg.n)};
  const VectorField in{e, zero};
  const auto delayed = delayed_on_grid(e, two_pi / kDelta, tg);
  EXPECT_NEAR(vector_fidelity(in, {delayed, zero}, kDelta), 1.0, 1e-10);
  EXPECT_NEAR(vector_fidelity(in, {zero, delayed}, kDelta), 0.0, 1e-15);
  auto rotated = delayed;
  for (auto& z : rotated.samples) z *= std::polar(1.0, 0.77);
  EXPECT_NEAR(vector_fidelity(in, {rotated, zero}, kDelta), vector_fidelity(in, {delayed, zero}, kDelta), 1e-12);
  EXPECT_THROW(vector_fidelity(in, {zero, zero}, kDelta), UndefinedFidelity);
}

TEST(DualStorage, FastPathMatchesGenericPath) {
  const auto c = make_ideal_comb(11, kDelta, kGamma, kW320);
  std::vector<CrossTooth> x;
  for (const auto& t : c.teeth()) x.push_back({t.detuning, 0.3 * kW320});
  for (const auto& dc : {DualComb(c, c, {}, ghz(0.8)), DualComb(c, c, x)}) {
    DualStorage st(dc, kL, grid_for_comb(dc.union_comb(), ghz(0.6)), kDelta, {}, {0.4, 1e-11});
    const auto tr = st.traces({ghz(0.45), ghz(0.02)});
    const auto gen = analyze_storage(std::span(tr.input), std::span(tr.output), kDelta);
    EXPECT_NEAR(gen.efficiency, tr.report.efficiency, 1e-10);
    EXPECT_NEAR(gen.fidelity, tr.report.fidelity, 1e-8);
  }
}

TEST(DualStorage, SwapSymmetry) {
  const auto cp = make_ideal_comb(11, kDelta, kGamma, kW320);
  const auto cm = make_ideal_comb(9, kDelta, kGamma, 0.7 * kW320).shifted(ghz(0.05));
  const DualComb a(cp, cm, {}, 0.0), b(cm, cp, {}, 0.0);
  const Polarization pin{{0.8, 0.0}, {0.0, 0.6}};
  const Polarization pswap{pin.minus, pin.plus};
  const auto fg = grid_for_comb(a.union_comb(), ghz(0.6));
  DualStorage sa(a, kL, fg, kDelta, pin), sb(b, kL, fg, kDelta, pswap);
  const auto ra = sa.evaluate({ghz(0.4), 0.0}), rb = sb.evaluate({ghz(0.4), 0.0});
  EXPECT_NEAR(ra.efficiency, rb.efficiency, 1e-12);
  EXPECT_NEAR(ra.fidelity, rb.fidelity, 1e-12);
}

TEST(DualStorage, IdenticalCombsStorePolarizationPerfectly) {
  const auto dc = identical_dual(11);
  DualStorage st(dc, kL, grid_for_comb(dc.union_comb(), ghz(0.6)), kDelta);
  const auto r = st.evaluate({ghz(0.45), 0.0});
  EXPECT_GT(r.efficiency, 0.53);
  EXPECT_GT(r.fidelity, 0.995);
}

// Closed form: shifting the combs by ±λ/2 multiplies the two echo components
// by e^{±iλt/2}.  Built from the λ = 0 output, this predicts F(λ) at fixed
// pulse; valid while λ is small against the pulse bandwidth.
TEST(DualStorage, FidelityOscillationFollowsTwoPhaseModel) {
  const auto dc = identical_dual(11);
  const PulseParams p{ghz(0.45), 0.0};
  const auto fg = grid_for_comb(dc.with_shift(ghz(0.3)).union_comb(), ghz(0.6));
  DualStorage s0(dc, kL, fg, kDelta);
  const auto tr = s0.traces(p);
  const double T = tr.report.echo_time;
  const auto win = echo_window(two_pi / T);
  const auto ref = delayed_on_grid(tr.input[0], T, tr.output[0].grid());
  const double ein = energy(tr.input[0]) + energy(tr.input[1]);
  const double eout = window_energy(tr.output[0], win.t1, win.t2) + window_energy(tr.output[1], win.t1, win.t2);
  for (double lg : {0.02, 0.05, 0.1, 0.15, 0.2}) {
    const double lam = ghz(lg);
    TemporalPulse cosmod = tr.output[0];
    for (std::size_t k = 0; k < cosmod.size(); ++k)
      cosmod.samples[k] *= std::cos(0.5 * lam * cosmod.time(k));
    // Both components carry amplitude 1/√2: overlap = 2·⟨ref, out₊ cos(λt/2)⟩.
    const double model = 4.0 * std::norm(window_overlap(ref, cosmod, win.t1, win.t2)) / (ein * eout);
    DualStorage sl(dc.with_shift(lam), kL, fg, kDelta);
    const auto r = sl.evaluate(p);
    EXPECT_NEAR(r.fidelity, model, 0.02) << "λ/2π = " << lg << " GHz";
    EXPECT_NEAR(r.fidelity, std::pow(std::cos(0.5 * lam * T), 2), 0.05);
  }
}

// Oracle: exhaustive 41×41 grid search over (width, mean) on the λ = 2 GHz
// dual comb.
TEST(DualStorage, OptimizerMatchesDenseGridSearch) {
  const auto dc = identical_dual(11).with_shift(ghz(2.0));
  const PulseBounds b{{ghz(0.1), ghz(1.0)}, {ghz(-0.5), ghz(0.5)}};
  DualStorage st(dc, kL, grid_for_comb(dc.union_comb(), b.width.hi), kDelta);
  double dense = 0.0;
  for (int i = 0; i < 41; ++i)
    for (int j = 0; j < 41; ++j) {
      const PulseParams p{b.width.lo + (b.width.hi - b.width.lo) * i / 40.0,
                          b.mean.lo + (b.mean.hi - b.mean.lo) * j / 40.0};
      dense = std::max(dense, st.evaluate(p).efficiency);
    }
  StorageObjective obj = [&](const PulseParams& p, double w) { return st.evaluate(p, w); };
  const auto r = optimize_pulse(obj, b, OptimizeMode::width_and_mean);
  EXPECT_NEAR(r.report.efficiency, dense, 0.005);
}
