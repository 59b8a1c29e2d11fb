// optimize.hpp
// ------------
// Bounded maximization of storage efficiency over the input pulse (and
// optionally the comb weight).  A coarse grid over the box locates the basin;
// GSL's Nelder–Mead simplex then refines in coordinates normalized to the box.
// The result is the best point ever evaluated, so it never falls below the
// best coarse-grid point.
#pragma once

#include "iafc/core/error.hpp"
#include "iafc/spectral/echo.hpp"
#include "iafc/spectral/pulse.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iafc {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
  bool fixed() const { return lo == hi; }
};

struct OptimizerSettings {
  int coarse_points = 0;            // per free axis; 0 = automatic
  int max_coarse_evaluations = 800; // automatic rule: 21 per axis within this budget
  double tolerance = 1e-4;          // simplex size in box-normalized coordinates
  int max_iterations = 400;
};

struct MaximizeResult {
  std::vector<double> x;
  double value = -std::numeric_limits<double>::infinity();
  double best_coarse_value = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

struct NMContext {
  const std::function<double(std::span<const double>)>* f;
  const std::vector<Bounds>* bounds;
  std::vector<std::size_t> free_axes;
  std::vector<double> x; // full-dimensional scratch point
  MaximizeResult* result;
};

inline double nm_trampoline(const gsl_vector* u, void* params) {
  auto& ctx = *static_cast<NMContext*>(params);
  double penalty = 0.0;
  for (std::size_t i = 0; i < ctx.free_axes.size(); ++i) {
    const double ui = gsl_vector_get(u, i);
    const double uc = std::clamp(ui, 0.0, 1.0);
    penalty += (ui - uc) * (ui - uc);
    const auto& b = (*ctx.bounds)[ctx.free_axes[i]];
    ctx.x[ctx.free_axes[i]] = b.lo + uc * (b.hi - b.lo);
  }
  double v = (*ctx.f)(ctx.x);
  ++ctx.result->evaluations;
  if (!std::isfinite(v)) v = -std::numeric_limits<double>::max() / 4;
  if (v > ctx.result->value) {
    ctx.result->value = v;
    ctx.result->x = ctx.x;
  }
  return -v + 1e3 * penalty;
}

} // namespace detail

inline int coarse_points_for(std::size_t free_axes, const OptimizerSettings& s) {
  if (s.coarse_points > 0) return s.coarse_points;
  int p = 21;
  while (p > 3 && std::pow(static_cast<double>(p), static_cast<double>(free_axes)) >
                      s.max_coarse_evaluations)
    --p;
  return p;
}

/// Maximize f over the box `bounds`.  Axes with lo == hi are held fixed.
inline MaximizeResult maximize(const std::function<double(std::span<const double>)>& f,
                               const std::vector<Bounds>& bounds,
                               const OptimizerSettings& settings = {}) {
  require(!bounds.empty(), "maximize: no axes");
  std::vector<std::size_t> free_axes;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& b = bounds[i];
    require(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo <= b.hi,
            "optimizer bounds must be finite with lo <= hi (axis " +
                std::to_string(i) + ")");
    if (!b.fixed()) free_axes.push_back(i);
  }
  require(settings.tolerance > 0.0, "optimizer tolerance must be > 0");

  MaximizeResult res;
  std::vector<double> x(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) x[i] = bounds[i].lo;
  auto eval = [&](const std::vector<double>& pt) {
    double v = f(pt);
    ++res.evaluations;
    if (!std::isfinite(v)) v = -std::numeric_limits<double>::max() / 4;
    if (v > res.value) {
      res.value = v;
      res.x = pt;
    }
    return v;
  };
  if (free_axes.empty()) {
    eval(x);
    res.best_coarse_value = res.value;
    res.converged = true;
    return res;
  }

  // Coarse grid.
  const int p = coarse_points_for(free_axes.size(), settings);
  std::vector<int> idx(free_axes.size(), 0);
  for (;;) {
    for (std::size_t a = 0; a < free_axes.size(); ++a) {
      const auto& b = bounds[free_axes[a]];
      x[free_axes[a]] = b.lo + (b.hi - b.lo) * idx[a] / (p - 1);
    }
    eval(x);
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] == p) idx[a++] = 0;
    if (a == idx.size()) break;
  }
  res.best_coarse_value = res.value;

  // Nelder–Mead refinement from the best coarse point.
  const std::size_t n = free_axes.size();
  detail::NMContext ctx{&f, &bounds, free_axes, res.x, &res};
  gsl_multimin_function fn{&detail::nm_trampoline, n, &ctx};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> u0(gsl_vector_alloc(n), gsl_vector_free),
      step(gsl_vector_alloc(n), gsl_vector_free);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& b = bounds[free_axes[a]];
    gsl_vector_set(u0.get(), a, (res.x[free_axes[a]] - b.lo) / (b.hi - b.lo));
    gsl_vector_set(step.get(), a, 0.5 / (p - 1));
  }
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> nm(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n),
      gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(nm.get(), &fn, u0.get(), step.get());
  for (int it = 0; it < settings.max_iterations; ++it) {
    const int status = gsl_multimin_fminimizer_iterate(nm.get());
    if (status != GSL_SUCCESS) {
      // No further progress possible: the simplex has collapsed.
      res.converged = status == GSL_ENOPROG;
      break;
    }
    const double size = gsl_multimin_fminimizer_size(nm.get());
    if (gsl_multimin_test_size(size, settings.tolerance) == GSL_SUCCESS) {
      res.converged = true;
      break;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Pulse optimization
// ---------------------------------------------------------------------------
enum class OptimizeMode {
  mean_only,      // width and weight fixed
  width_and_mean, // weight fixed
  weight_too,     // width, mean and global weight scale
};

struct PulseBounds {
  Bounds width;
  Bounds mean;
  Bounds weight_scale{1.0, 1.0};
};

/// Default search box for a comb spanning `span` (rad/s): width ∈
/// [0.1, 0.5]·span, mean offset ∈ ±½·span, weight scale ∈ [0.1, 10] relative
/// to the calibrated weight.
inline PulseBounds default_bounds(double span) {
  require(span > 0.0 && std::isfinite(span), "comb span must be > 0");
  return {{0.1 * span, 0.5 * span}, {-0.5 * span, 0.5 * span}, {0.1, 10.0}};
}

struct OptResult {
  PulseParams best{};
  double weight_scale = 1.0;
  MemoryReport report{};
  int evaluations = 0;
  double best_coarse_efficiency = 0.0;
  bool converged = false;
};

using StorageObjective = std::function<MemoryReport(const PulseParams&, double)>;

inline OptResult optimize_pulse(const StorageObjective& objective,
                                const PulseBounds& bounds, OptimizeMode mode,
                                const PulseParams& fixed = {}, double fixed_weight = 1.0,
                                const OptimizerSettings& settings = {}) {
  std::vector<Bounds> box{bounds.width, bounds.mean, bounds.weight_scale};
  switch (mode) {
    case OptimizeMode::mean_only:
      box[0] = {fixed.width, fixed.width};
      box[2] = {fixed_weight, fixed_weight};
      break;
    case OptimizeMode::width_and_mean:
      box[2] = {fixed_weight, fixed_weight};
      break;
    case OptimizeMode::weight_too:
      break;
  }
  require(box[0].lo > 0.0, "pulse width bounds must be > 0");
  require(box[2].lo >= 0.0, "weight scale bounds must be >= 0");
  auto f = [&](std::span<const double> x) {
    return objective({x[0], x[1]}, x[2]).efficiency;
  };
  const auto m = maximize(f, box, settings);
  OptResult r;
  r.best = {m.x[0], m.x[1]};
  r.weight_scale = m.x[2];
  r.report = objective(r.best, r.weight_scale);
  r.evaluations = m.evaluations + 1;
  r.best_coarse_efficiency = m.best_coarse_value;
  r.converged = m.converged;
  return r;
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------
inline const std::set<std::string, std::less<>>& sweep_axes() {
  static const std::set<std::string, std::less<>> axes{
      "lambda", "ell", "temperature", "width", "mean", "weight", "optical_depth",
      "density_waist", "field"};
  return axes;
}

struct SweepRow {
  double value = 0.0;
  OptResult result;
};

/// Run `point` once per value.  Points are independent, so the table does not
/// depend on the order in which they are evaluated.
inline std::vector<SweepRow> sweep(std::string_view axis, std::span<const double> values,
                                   const std::function<OptResult(double)>& point) {
  require(sweep_axes().count(axis) > 0, "unknown sweep axis '" + std::string(axis) + "'");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    require(std::isfinite(v), "sweep values must be finite");
    rows.push_back({v, point(v)});
  }
  return rows;
}

} // namespace iafc
