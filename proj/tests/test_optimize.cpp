// Tests for the bounded coarse-grid + simplex optimizer and sweeps.

#include "iafc/optimize/optimize.hpp"
#include "iafc/spectral/storage.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace iafc;

TEST(Maximize, RecoversConcaveQuadraticMaximizer) {
  auto f = [](std::span<const double> x) {
    return 1.0 - (x[0] - 0.3137) * (x[0] - 0.3137) - 2.0 * (x[1] + 0.7071) * (x[1] + 0.7071);
  };
  OptimizerSettings s;
  s.tolerance = 1e-7;
  s.max_iterations = 5000;
  const auto r = maximize(f, {{-1.0, 1.0}, {-1.0, 1.0}}, s);
  EXPECT_NEAR(r.x[0], 0.3137, 1e-6);
  EXPECT_NEAR(r.x[1], -0.7071, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(Maximize, ResultDominatesCoarseGrid) {
  auto f = [](std::span<const double> x) {
    return std::sin(5 * x[0]) * std::cos(3 * x[1]) + 0.1 * x[0];
  };
  const auto r = maximize(f, {{-2.0, 2.0}, {-1.0, 1.5}});
  EXPECT_GE(r.value, r.best_coarse_value);
  EXPECT_EQ(r.x.size(), 2u);
}

TEST(Maximize, MaximumOnBoundaryIsRespected) {
  auto f = [](std::span<const double> x) { return x[0]; };
  const auto r = maximize(f, {{0.0, 2.0}});
  EXPECT_DOUBLE_EQ(r.value, 2.0);
}

TEST(Maximize, RejectsEmptyBounds) {
  auto f = [](std::span<const double>) { return 0.0; };
  EXPECT_THROW(maximize(f, {{1.0, 0.0}}), InvalidArgument);
  EXPECT_THROW(maximize(f, {{0.0, NAN}}), InvalidArgument);
  EXPECT_THROW(maximize(f, {}), InvalidArgument);
}

TEST(Maximize, FixedAxesAreHeld) {
  auto f = [](std::span<const double> x) { return -(x[0] - 0.5) * (x[0] - 0.5) - x[1]; };
  const auto r = maximize(f, {{0.0, 1.0}, {0.25, 0.25}});
  EXPECT_DOUBLE_EQ(r.x[1], 0.25);
  EXPECT_NEAR(r.x[0], 0.5, 1e-3);
}

TEST(Maximize, CoarseGridSizeRule) {
  OptimizerSettings s;
  EXPECT_EQ(coarse_points_for(1, s), 21);
  EXPECT_EQ(coarse_points_for(2, s), 21);
  EXPECT_EQ(coarse_points_for(3, s), 9);
  s.coarse_points = 5;
  EXPECT_EQ(coarse_points_for(3, s), 5);
}

namespace {
struct IdealFixture {
  MediumSpec med{make_ideal_comb(9, ghz(0.4), 5e6, weight_for_optical_depth(320, 5e6, 0.01)), 0.01};
  mutable ScalarStorage st{med, grid_for_comb(med.comb, ghz(1.0)), ghz(0.4)};
  StorageObjective obj() const {
    return [this](const PulseParams& p, double s) { return st.evaluate(p, s); };
  }
};
} // namespace

TEST(OptimizePulse, DeterministicAndDominant) {
  IdealFixture fx;
  const PulseBounds b{{ghz(0.1), ghz(1.0)}, {ghz(-0.2), ghz(0.2)}};
  const auto r1 = optimize_pulse(fx.obj(), b, OptimizeMode::width_and_mean);
  const auto r2 = optimize_pulse(fx.obj(), b, OptimizeMode::width_and_mean);
  EXPECT_EQ(r1.best.width, r2.best.width);
  EXPECT_EQ(r1.best.mean_offset, r2.best.mean_offset);
  EXPECT_EQ(r1.report.efficiency, r2.report.efficiency);
  EXPECT_GE(r1.report.efficiency, r1.best_coarse_efficiency);
  // Symmetric comb: η is even in the mean offset.
  const auto m = r1.best;
  EXPECT_NEAR(fx.st.evaluate({m.width, -m.mean_offset}).efficiency, r1.report.efficiency, 1e-9);
  EXPECT_GT(r1.report.efficiency, 0.53);
}

TEST(OptimizePulse, MeanOnlyHoldsWidthAndWeight) {
  IdealFixture fx;
  const PulseBounds b{{ghz(0.1), ghz(1.0)}, {ghz(-0.2), ghz(0.2)}, {0.5, 2.0}};
  const auto r = optimize_pulse(fx.obj(), b, OptimizeMode::mean_only, {ghz(0.3), 0.0}, 0.8);
  EXPECT_DOUBLE_EQ(r.best.width, ghz(0.3));
  EXPECT_DOUBLE_EQ(r.weight_scale, 0.8);
}

// η(b) at the optimal weight rises to a single maximum and then falls.
TEST(OptimizePulse, EfficiencyUnimodalInWidth) {
  IdealFixture fx;
  std::vector<double> eta;
  for (int i = 0; i < 12; ++i) eta.push_back(fx.st.evaluate({ghz(0.1 + 0.15 * i), 0.0}).efficiency);
  const auto peak = std::max_element(eta.begin(), eta.end()) - eta.begin();
  for (long i = 0; i < peak; ++i) EXPECT_LT(eta[i], eta[i + 1]);
  for (long i = peak; i + 1 < static_cast<long>(eta.size()); ++i) EXPECT_GT(eta[i], eta[i + 1]);
  EXPECT_GT(peak, 0);
}

TEST(Sweep, AxisValidationAndOrderInsensitivity) {
  auto point = [](double v) {
    OptResult r;
    r.report.efficiency = v * v;
    return r;
  };
  EXPECT_THROW(sweep("bogus", std::vector<double>{1.0}, point), InvalidArgument);
  EXPECT_TRUE(sweep("lambda", std::vector<double>{}, point).empty());
  const auto a = sweep("lambda", std::vector<double>{1.0, 2.0, 3.0}, point);
  const auto b = sweep("lambda", std::vector<double>{3.0, 1.0, 2.0}, point);
  for (const auto& ra : a) {
    const auto it = std::find_if(b.begin(), b.end(), [&](const SweepRow& rb) { return rb.value == ra.value; });
    ASSERT_NE(it, b.end());
    EXPECT_EQ(it->result.report.efficiency, ra.result.report.efficiency);
  }
}
