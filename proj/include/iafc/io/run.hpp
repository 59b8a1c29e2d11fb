// run.hpp
// -------
// Experiment orchestration: turns a validated RunConfig into the physical
// objects of the library, evaluates or optimizes storage, and renders the
// results as tables.  Everything is computed in memory; emission to disk is a
// separate step (write_artifacts), so a failing run leaves no files.
#pragma once

#include "iafc/atoms.hpp"
#include "iafc/io/atom_data.hpp"
#include "iafc/io/config.hpp"
#include "iafc/io/output.hpp"
#include "iafc/optimize/optimize.hpp"
#include "iafc/polarization/vector.hpp"
#include "iafc/spectral/storage.hpp"
#include "iafc/thermal.hpp"
#include "iafc/transverse.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace iafc::io {

struct RunOptions {
  int threads = 1;
  bool timestamp = true;
};

struct RunResult {
  std::vector<Table> tables;
  std::vector<Artifact> artifacts;
  std::vector<std::string> summary; // human-readable lines for the console
};

// ---------------------------------------------------------------------------
// Building physical inputs
// ---------------------------------------------------------------------------

inline double gamma_rate(double gamma_per_us) { return gamma_per_us * 1e6; }

inline FrequencyComb build_comb(const CombConfig& c, double length) {
  if (c.kind == "explicit") {
    std::vector<CombTooth> teeth;
    for (const auto& t : c.list) teeth.push_back({-mhz(t.detuning_mhz), t.weight, gamma_rate(t.gamma_per_us)});
    return FrequencyComb(std::move(teeth));
  }
  const double delta = mhz(c.spacing_mhz);
  return make_ideal_comb(c.teeth, delta, gamma_rate(c.gamma_per_us),
                         weight_for_mean_optical_depth(c.optical_depth, delta, length));
}

inline AtomData atom_data(const AtomConfig& a) {
  return a.data_file.empty() ? builtin_atom(a.name) : load_atom_data(a.data_file);
}

/// Atomic dual comb with its weight calibrated to the requested mean optical
/// depth of the σ⁺ comb.
inline AtomicDualComb build_atomic(const AtomConfig& a, double length) {
  AtomicCombOptions opt;
  opt.linewidth = gamma_rate(a.gamma_per_us);
  opt.manifold = a.manifold == "all"     ? GroundManifold::all
                 : a.manifold == "lower" ? GroundManifold::lower
                                         : GroundManifold::upper;
  const AtomData data = atom_data(a);
  const auto unit = make_atomic_dual_comb(data, a.field_t, 1.0, opt);
  const double od = mean_optical_depth(unit.combs.base_plus(), length);
  return make_atomic_dual_comb(data, a.field_t, a.optical_depth / od, opt);
}

inline DualComb build_dual(const RunConfig& c) {
  if (c.atom) return build_atomic(*c.atom, c.medium.length_m).combs;
  const auto& d = *c.dual_comb;
  const double delta = mhz(d.spacing_mhz);
  const auto comb = make_ideal_comb(d.teeth, delta, gamma_rate(d.gamma_per_us),
                                    weight_for_mean_optical_depth(d.optical_depth, delta,
                                                                  c.medium.length_m));
  return DualComb(comb, comb, {}, ghz(d.shift_ghz));
}

/// Polarization in the circular basis ê± = (x̂ ± iŷ)/√2.
inline Polarization polarization_state(const std::string& name) {
  const double r = 1.0 / std::numbers::sqrt2;
  const cdouble i{0.0, 1.0};
  if (name == "H") return {r, r};
  if (name == "V") return {-i * r, i * r};
  if (name == "D") return {0.5 * (1.0 - i), 0.5 * (1.0 + i)};
  if (name == "A") return {0.5 * (1.0 + i), 0.5 * (1.0 - i)};
  if (name == "R") return Polarization::right();
  if (name == "L") return Polarization::left();
  throw InvalidArgument("unknown polarization '" + name + "'");
}

inline std::vector<ModeComponent> build_modes(const TransverseConfig& t) {
  std::vector<ModeComponent> out;
  for (const auto& m : t.modes)
    out.push_back({{m.ell, m.p, t.w0_mm * 1e-3, t.wavelength_nm * 1e-9}, cdouble(m.re, m.im)});
  return out;
}

inline TransverseGrid build_grid(const TransverseConfig& t) {
  return TransverseGrid::square(static_cast<std::size_t>(t.grid_points), t.extent_w0 * t.w0_mm * 1e-3);
}

inline OptimizeMode optimize_mode(const std::string& m) {
  if (m == "mean-only") return OptimizeMode::mean_only;
  if (m == "weight-too") return OptimizeMode::weight_too;
  return OptimizeMode::width_and_mean;
}

inline GridPolicy grid_policy(const GridConfig& g) {
  return {g.span_factor, g.width_factor, g.points_per_linewidth};
}

inline PulseParams pulse_params(const PulseConfig& p) {
  return {ghz(p.width_ghz), ghz(p.mean_ghz)};
}

// ---------------------------------------------------------------------------
// Storage problems
// ---------------------------------------------------------------------------

/// An evaluator for one physical configuration together with its search box.
struct Problem {
  StorageObjective objective;
  PulseBounds bounds;
  double span = 0.0;          // comb span, rad/s
  double delta_nominal = 0.0; // rad/s
  std::function<Table(const PulseParams&, double)> traces; // optional time traces
};

inline PulseBounds resolve_bounds(const OptimizerConfig& o, double span) {
  PulseBounds b = default_bounds(span);
  if (o.width_ghz) b.width = {ghz((*o.width_ghz)[0]), ghz((*o.width_ghz)[1])};
  if (o.mean_ghz) b.mean = {ghz((*o.mean_ghz)[0]), ghz((*o.mean_ghz)[1])};
  if (o.weight) b.weight_scale = {(*o.weight)[0], (*o.weight)[1]};
  return b;
}

namespace detail {

/// Widest pulse the spectral grid must carry.
inline double grid_width(const RunConfig& c, const PulseBounds& b) {
  const bool optimizing = c.experiment == "optimize" || c.experiment == "sweep";
  if (!optimizing || optimize_mode(c.optimizer.mode) == OptimizeMode::mean_only)
    return ghz(c.pulse.width_ghz);
  return b.width.hi;
}

inline Table intensity_traces(const TimeGrid& tg, double period,
                              const std::vector<std::pair<std::string, const TemporalPulse*>>& cols) {
  Table t{"traces", {"t_ns"}, {}};
  for (const auto& c : cols) t.columns.push_back(c.first);
  for (std::size_t k = 0; k < tg.n; ++k) {
    const double time = tg.time(k);
    if (time < -0.5 * period || time > 2.75 * period) continue;
    std::vector<double> row{time * 1e9};
    for (const auto& c : cols) row.push_back(std::norm(c.second->samples[k]));
    t.add(std::move(row));
  }
  return t;
}

inline Problem echo_problem(const RunConfig& c) {
  const double L = c.medium.length_m;
  const auto comb = build_comb(*c.comb, L);
  Problem pr;
  pr.span = comb.size() >= 2 ? comb.span() : 10.0 * comb.min_linewidth();
  pr.bounds = resolve_bounds(c.optimizer, pr.span);
  pr.delta_nominal = nominal_spacing(comb);
  const auto fg = grid_for_comb(comb, grid_width(c, pr.bounds), grid_policy(c.grid));
  auto st = std::make_shared<ScalarStorage>(MediumSpec{comb, L}, fg, pr.delta_nominal);
  pr.objective = [st](const PulseParams& p, double w) { return st->evaluate(p, w); };
  const double period = two_pi / pr.delta_nominal;
  pr.traces = [st, period](const PulseParams& p, double w) {
    const auto tr = st->traces(p, w);
    return intensity_traces(tr.input.grid(), period,
                            {{"input_intensity", &tr.input}, {"output_intensity", &tr.output}});
  };
  return pr;
}

inline Problem polarization_problem(const RunConfig& c) {
  const double L = c.medium.length_m;
  const DualComb dc = build_dual(c);
  const auto pol = polarization_state(c.polarization->input);
  const WavePlate plate{c.polarization->plate_phase, c.polarization->plate_delay_ns * 1e-9};
  Problem pr;
  const DualComb unshifted = dc.with_shift(0.0);
  pr.span = unshifted.union_comb().span();
  pr.bounds = resolve_bounds(c.optimizer, pr.span);
  pr.delta_nominal = dual_nominal_spacing(dc);
  const auto fg = grid_for_comb(dc.union_comb(), grid_width(c, pr.bounds), grid_policy(c.grid));
  auto st = std::make_shared<DualStorage>(dc, L, fg, pr.delta_nominal, pol, plate);
  pr.objective = [st](const PulseParams& p, double w) { return st->evaluate(p, w); };
  const double period = two_pi / pr.delta_nominal;
  pr.traces = [st, period](const PulseParams& p, double w) {
    const auto tr = st->traces(p, w);
    return intensity_traces(tr.input[0].grid(), period,
                            {{"input_plus", &tr.input[0]},
                             {"input_minus", &tr.input[1]},
                             {"output_plus", &tr.output[0]},
                             {"output_minus", &tr.output[1]}});
  };
  return pr;
}

/// Homogeneous media are separable: the transverse factor (diffraction over
/// L) is computed once and combined with scalar storage of the envelope.
/// Gaussian densities are solved by split-step propagation per evaluation.
inline Problem transverse_problem(const RunConfig& c, const RunOptions& o) {
  const double L = c.medium.length_m;
  const auto comb = build_comb(*c.comb, L);
  const auto& tc = *c.transverse;
  const auto grid = build_grid(tc);
  const auto in = superposition(build_modes(tc), 0.0, grid);
  Problem pr;
  pr.span = comb.size() >= 2 ? comb.span() : 10.0 * comb.min_linewidth();
  pr.bounds = resolve_bounds(c.optimizer, pr.span);
  pr.delta_nominal = nominal_spacing(comb);
  const auto fg = grid_for_comb(comb, grid_width(c, pr.bounds), grid_policy(c.grid));
  const MediumSpec medium{comb, L};
  if (tc.density == "homogeneous") {
    const auto out = free_propagate(in, L);
    const double e_in = field_energy(in), e_out = field_energy(out);
    const double mode = std::norm(overlap(in, out)) / (e_in * e_out);
    auto st = std::make_shared<ScalarStorage>(medium, fg, pr.delta_nominal);
    pr.objective = [st, mode, ratio = e_out / e_in](const PulseParams& p, double w) {
      MemoryReport r = st->evaluate(p, w);
      r.efficiency *= ratio;
      r.fidelity *= mode;
      return r;
    };
    return pr;
  }
  const auto density = DensityProfile::gaussian(tc.density_waist_ratio * tc.w0_mm * 1e-3);
  const double dnom = pr.delta_nominal;
  const auto nz = static_cast<std::size_t>(tc.nz);
  const bool check = tc.check_convergence;
  const int threads = o.threads;
  pr.objective = [=](const PulseParams& p, double w) {
    InhomogeneousOptions io;
    io.delta_nominal = dnom;
    io.check_convergence = check;
    io.threads = threads;
    const auto spectrum = gaussian_spectrum(fg, p);
    const auto res = propagate_inhomogeneous(in, spectrum, MediumSpec{medium.comb.scaled(w), L},
                                             density, nz, io);
    MemoryReport r = analyze_space_time(res.field, in, spectrum, dnom);
    r.input = p;
    r.weight_scale = w;
    return r;
  };
  return pr;
}

inline Problem thermal_problem(const RunConfig& c) {
  const double L = c.medium.length_m;
  const auto comb = build_comb(*c.comb, L);
  const auto& tc = *c.transverse;
  const auto& th = *c.thermal;
  Problem pr;
  pr.span = comb.size() >= 2 ? comb.span() : 10.0 * comb.min_linewidth();
  pr.bounds = resolve_bounds(c.optimizer, pr.span);
  pr.delta_nominal = nominal_spacing(comb);
  const auto fg = grid_for_comb(comb, grid_width(c, pr.bounds), grid_policy(c.grid));
  ThermalOptions opt;
  opt.nodes = static_cast<std::size_t>(th.nodes);
  const ThermalSpec spec{th.temperature_k, th.mass_amu * constants::atomic_mass_unit, th.fit_const};
  auto st = std::make_shared<ThermalStorage>(MediumSpec{comb, L}, spec, build_modes(tc),
                                             build_grid(tc), fg, pr.delta_nominal, opt);
  pr.objective = [st](const PulseParams& p, double w) { return st->evaluate(p, w); };
  return pr;
}

} // namespace detail

inline Problem make_problem(const RunConfig& c, const RunOptions& o = {}) {
  const std::string& p = c.physics();
  if (p == "echo") return detail::echo_problem(c);
  if (p == "polarization") return detail::polarization_problem(c);
  if (p == "transverse") return detail::transverse_problem(c, o);
  if (p == "thermal") return detail::thermal_problem(c);
  throw InvalidArgument("experiment '" + p + "' has no storage objective");
}

inline OptResult optimize_problem(const RunConfig& c, const Problem& pr) {
  OptimizerSettings s;
  s.coarse_points = c.optimizer.coarse_points;
  s.tolerance = c.optimizer.tolerance;
  s.max_iterations = c.optimizer.max_iterations;
  return optimize_pulse(pr.objective, pr.bounds, optimize_mode(c.optimizer.mode),
                        pulse_params(c.pulse), c.pulse.weight_scale, s);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Copy of `c` with the sweep axis set to `v`.
inline RunConfig at_axis_value(const RunConfig& c, const std::string& axis, double v) {
  RunConfig r = c;
  auto bad = [&](const std::string& why) {
    throw ConfigError({{"sweep.axis", 0, "axis '" + axis + "' " + why}});
  };
  const std::string& p = c.physics();
  if (axis == "lambda") {
    if (p != "polarization" || !r.dual_comb) bad("needs a polarization target with a dual_comb");
    r.dual_comb->shift_ghz = v;
  } else if (axis == "ell") {
    if (!r.transverse) bad("needs a transverse section");
    if (std::abs(v - std::round(v)) > 1e-12) bad("values must be integers");
    r.transverse->modes = {ModeConfig{static_cast<int>(std::lround(v)), 0, 1.0, 0.0}};
  } else if (axis == "temperature") {
    if (!r.thermal) bad("needs a thermal section");
    r.thermal->temperature_k = v;
  } else if (axis == "width") {
    r.pulse.width_ghz = v;
    r.optimizer.mode = "mean-only";
  } else if (axis == "mean") {
    r.pulse.mean_ghz = v;
    r.optimizer.mean_ghz = std::array<double, 2>{v, v};
  } else if (axis == "weight") {
    if (r.optimizer.mode == "weight-too") bad("conflicts with optimizer mode weight-too");
    r.pulse.weight_scale = v;
  } else if (axis == "optical_depth") {
    if (p == "polarization") {
      if (r.atom) r.atom->optical_depth = v;
      else r.dual_comb->optical_depth = v;
    } else {
      r.comb->optical_depth = v;
    }
  } else if (axis == "density_waist") {
    if (!r.transverse) bad("needs a transverse section");
    r.transverse->density = "gaussian";
    r.transverse->density_waist_ratio = v;
  } else if (axis == "field") {
    if (!r.atom) bad("needs an atom section");
    r.atom->field_t = v;
  }
  return r;
}

inline Table sweep_table(const RunConfig& c, const RunOptions& o) {
  const auto& s = *c.sweep;
  Table t{"sweep", {"axis_value", "eta", "fidelity", "b_GHz", "mean_GHz", "weight_scale"}, {}};
  const auto rows = sweep(s.axis, s.values, [&](double v) {
    const RunConfig point = at_axis_value(c, s.axis, v);
    return optimize_problem(point, make_problem(point, o));
  });
  for (const auto& r : rows)
    t.add({r.value, r.result.report.efficiency, r.result.report.fidelity, to_ghz(r.result.best.width),
           to_ghz(r.result.best.mean_offset), r.result.weight_scale});
  return t;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

namespace detail {

inline Table report_table(const MemoryReport& r) {
  Table t{"summary", {"eta", "fidelity", "echo_time_ns", "b_GHz", "mean_GHz", "weight_scale", "echo_found"}, {}};
  t.add({r.efficiency, r.fidelity, r.echo_time * 1e9, to_ghz(r.input.width),
         to_ghz(r.input.mean_offset), r.weight_scale, r.echo_found ? 1.0 : 0.0});
  return t;
}

inline std::string describe(const MemoryReport& r) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "eta = %.4f  F = %.6f  echo at %.4f ns  (b = %.4f GHz, mean = %.4f GHz, weight x%.4g)",
                r.efficiency, r.fidelity, r.echo_time * 1e9, to_ghz(r.input.width),
                to_ghz(r.input.mean_offset), r.weight_scale);
  return buf;
}

inline Table atom_comb_table(const RunConfig& c) {
  const auto a = build_atomic(*c.atom, c.medium.length_m);
  Table t{"comb", {"detuning_GHz", "weight", "q"}, {}};
  for (int q : {+1, -1}) {
    const auto& comb = q > 0 ? a.combs.base_plus() : a.combs.base_minus();
    for (const auto& tooth : comb.teeth()) t.add({to_ghz(tooth.resonance()), tooth.weight, double(q)});
  }
  return t;
}

/// Transverse diagnostics: azimuthal spectra and intensity profiles of the
/// input and the echo (time-integrated over the echo window).
inline std::vector<Table> transverse_tables(const RunConfig& c, const RunOptions& o,
                                            const MemoryReport& r) {
  const double L = c.medium.length_m;
  const auto& tc = *c.transverse;
  const auto comb = build_comb(c.comb.value(), L).scaled(r.weight_scale);
  const auto grid = build_grid(tc);
  const auto in = superposition(build_modes(tc), 0.0, grid);
  const double dnom = nominal_spacing(comb);
  const auto fg = grid_for_comb(comb, r.input.width, grid_policy(c.grid));
  const auto spectrum = gaussian_spectrum(fg, r.input);
  SpaceTimeField field;
  if (tc.density == "homogeneous") {
    field = outer_product(propagate_homogeneous(in, spectrum, {comb, L}), dnom);
  } else {
    InhomogeneousOptions io;
    io.delta_nominal = dnom;
    io.check_convergence = tc.check_convergence;
    io.threads = o.threads;
    field = propagate_inhomogeneous(in, spectrum, {comb, L},
                                    DensityProfile::gaussian(tc.density_waist_ratio * tc.w0_mm * 1e-3),
                                    static_cast<std::size_t>(tc.nz), io)
                .field;
  }
  // Echo-window fluence and the field at the echo peak.
  const TimeGrid tg{field.t0, field.dt, field.nt};
  const auto w = window_weights(tg, 0.5 * r.echo_time, 1.5 * r.echo_time);
  const auto peak = static_cast<std::size_t>(
      std::clamp(std::lround((r.echo_time - field.t0) / field.dt), 0L, static_cast<long>(field.nt) - 1));
  TransverseField echo{grid, L, in.wavelength, std::vector<cdouble>(grid.size())};
  std::vector<double> fluence(grid.size(), 0.0);
  for (std::size_t px = 0; px < grid.size(); ++px) {
    echo.samples[px] = field.at(px, peak);
    for (std::size_t i = 0; i < w.weights.size(); ++i) fluence[px] += w.weights[i] * std::norm(field.at(px, w.first + i));
  }
  const auto s_in = azimuthal_spectrum(in), s_out = azimuthal_spectrum(echo);
  Table az{"azimuthal", {"ell", "input_fraction", "echo_fraction"}, {}};
  for (int l = -s_in.half; l < s_in.half; ++l)
    az.add({double(l), s_in.at(l) / s_in.total(), s_out.at(l) / s_out.total()});
  Table prof{"profile", {"x_mm", "y_mm", "input_intensity", "echo_fluence"}, {}};
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const std::size_t px = j * grid.nx + i;
      prof.add({grid.x(i) * 1e3, grid.y(j) * 1e3, std::norm(in.samples[px]), fluence[px]});
    }
  return {az, prof};
}

} // namespace detail

/// Runs the experiment named in `c` and renders its tables (CSV and, if
/// enabled, SVG) without touching the file system.
inline RunResult run(const RunConfig& c, const RunOptions& o = {}) {
  RunResult res;
  if (c.experiment == "atoms") {
    res.tables.push_back(detail::atom_comb_table(c));
    res.summary.push_back(std::to_string(res.tables[0].rows.size()) + " teeth");
  } else if (c.experiment == "sweep") {
    res.tables.push_back(sweep_table(c, o));
    res.summary.push_back(std::to_string(res.tables[0].rows.size()) + " sweep points along " + c.sweep->axis);
  } else {
    const Problem pr = make_problem(c, o);
    MemoryReport r;
    if (c.experiment == "optimize") {
      const OptResult opt = optimize_problem(c, pr);
      r = opt.report;
      Table t = detail::report_table(r);
      t.columns.push_back("evaluations");
      t.columns.push_back("converged");
      t.rows[0].push_back(opt.evaluations);
      t.rows[0].push_back(opt.converged ? 1.0 : 0.0);
      res.tables.push_back(std::move(t));
      res.summary.push_back("optimized: " + detail::describe(r));
      if (pr.traces) res.tables.push_back(pr.traces(opt.best, opt.weight_scale));
    } else {
      r = pr.objective(pulse_params(c.pulse), c.pulse.weight_scale);
      res.tables.push_back(detail::report_table(r));
      res.summary.push_back(detail::describe(r));
      if (pr.traces) res.tables.push_back(pr.traces(pulse_params(c.pulse), c.pulse.weight_scale));
      if (c.experiment == "transverse")
        for (auto& t : detail::transverse_tables(c, o, r)) res.tables.push_back(std::move(t));
    }
  }

  const HeaderInfo h{c.experiment, serialize(c), o.timestamp};
  for (const auto& t : res.tables) {
    res.artifacts.push_back({c.experiment + "_" + t.name + ".csv", to_csv(t, h)});
    if (!c.output.svg) continue;
    if (t.name == "traces") {
      std::vector<std::string> ys(t.columns.begin() + 1, t.columns.end());
      res.artifacts.push_back({c.experiment + "_traces.svg", svg_plot(t, "t_ns", ys, c.experiment + ": intensity")});
    } else if (t.name == "sweep") {
      res.artifacts.push_back({c.experiment + "_sweep.svg",
                               svg_plot(t, "axis_value", {"eta", "fidelity"}, "sweep over " + c.sweep->axis)});
    } else if (t.name == "azimuthal") {
      res.artifacts.push_back({c.experiment + "_azimuthal.svg",
                               svg_plot(t, "ell", {"input_fraction", "echo_fraction"}, "azimuthal spectrum")});
    } else if (t.name == "comb") {
      // Stick spectrum: each tooth drawn as a vertical line from zero.
      std::vector<std::vector<double>> teeth = t.rows;
      std::sort(teeth.begin(), teeth.end());
      Table plus{"plus", {"detuning_GHz", "weight_plus", "weight_minus"}, {}};
      for (const auto& row : teeth) {
        const double wp = row[2] > 0 ? row[1] : 0.0, wm = row[2] < 0 ? row[1] : 0.0;
        plus.add({row[0], 0.0, 0.0});
        plus.add({row[0], wp, wm});
        plus.add({row[0], 0.0, 0.0});
      }
      res.artifacts.push_back({c.experiment + "_comb.svg",
                               svg_plot(plus, "detuning_GHz", {"weight_plus", "weight_minus"}, "atomic dual comb")});
    }
  }
  return res;
}

} // namespace iafc::io
