// config.hpp
// ----------
// Run configuration: a YAML document with one section per physical
// ingredient.  Parsing collects every problem (unknown keys, unit violations,
// missing sections, malformed values) with its dotted path and line before
// failing, and serialization writes every field of every present section so
// that defaults are always visible in the output headers.
//
// Quantities are kept in the units in which they are written (GHz, MHz, mm,
// nm, K, µs⁻¹); conversion to rad/s and metres happens in run.hpp.
#pragma once

#include "iafc/core/error.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iafc::io {

// ---------------------------------------------------------------------------
// Configuration sections
// ---------------------------------------------------------------------------

struct ToothConfig {
  double detuning_mhz = 0.0;
  double weight = 0.0;        // s^-1 m^-1
  double gamma_per_us = 5.0;  // linewidth γ in µs⁻¹ (5 → 5e6 s⁻¹)
  bool operator==(const ToothConfig&) const = default;
};

struct CombConfig {
  std::string kind = "ideal"; // ideal | explicit
  int teeth = 9;
  double spacing_mhz = 400.0;
  double gamma_per_us = 5.0;
  double optical_depth = 2.0; // comb-averaged intensity optical depth
  std::vector<ToothConfig> list;
  bool operator==(const CombConfig&) const = default;
};

struct DualCombConfig {
  int teeth = 11;
  double spacing_mhz = 400.0;
  double gamma_per_us = 5.0;
  double optical_depth = 2.0;
  double shift_ghz = 0.0;
  bool operator==(const DualCombConfig&) const = default;
};

struct AtomConfig {
  std::string name = "cs";  // cs | rb | rb87
  std::string data_file;    // optional YAML atomic-data file overriding the built-in
  double field_t = 0.05;
  std::string manifold = "upper"; // upper | lower | all
  double gamma_per_us = 5.0;
  double optical_depth = 2.0;
  bool operator==(const AtomConfig&) const = default;
};

struct MediumConfig {
  double length_m = 0.01;
  bool operator==(const MediumConfig&) const = default;
};

/// Spectral sampling: window = span_factor·(comb span) + width_factor·(pulse
/// width), step = narrowest linewidth / points_per_linewidth.
struct GridConfig {
  double span_factor = 4.0;
  double width_factor = 6.0;
  double points_per_linewidth = 6.0;
  bool operator==(const GridConfig&) const = default;
};

struct PulseConfig {
  double width_ghz = 0.5;
  double mean_ghz = 0.0;
  double weight_scale = 1.0;
  bool operator==(const PulseConfig&) const = default;
};

struct PolarizationConfig {
  std::string input = "H"; // H | V | D | A | R | L
  double plate_phase = 0.0;
  double plate_delay_ns = 0.0;
  bool operator==(const PolarizationConfig&) const = default;
};

struct ModeConfig {
  int ell = 1;
  int p = 0;
  double re = 1.0;
  double im = 0.0;
  bool operator==(const ModeConfig&) const = default;
};

struct TransverseConfig {
  double w0_mm = 4.0;
  double wavelength_nm = 387.7;
  int grid_points = 64;
  double extent_w0 = 8.0;
  std::vector<ModeConfig> modes{ModeConfig{}};
  std::string density = "homogeneous"; // homogeneous | gaussian
  double density_waist_ratio = 0.71;   // w0'/w0 for the gaussian density
  int nz = 16;
  bool check_convergence = true;
  bool operator==(const TransverseConfig&) const = default;
};

struct ThermalConfig {
  double temperature_k = 0.0;
  double mass_amu = 132.905451933;
  double fit_const = 0.76;
  int nodes = 5;
  bool operator==(const ThermalConfig&) const = default;
};

struct OptimizerConfig {
  std::string mode = "width-and-mean"; // width-and-mean | mean-only | weight-too
  int coarse_points = 0;               // 0: automatic
  double tolerance = 1e-4;
  int max_iterations = 400;
  std::optional<std::array<double, 2>> width_ghz; // default: [0.1, 0.5] × span
  std::optional<std::array<double, 2>> mean_ghz;  // default: ±0.5 × span
  std::optional<std::array<double, 2>> weight;    // default: [0.1, 10]
  bool operator==(const OptimizerConfig&) const = default;
};

struct SweepConfig {
  std::string axis = "lambda";
  std::vector<double> values;
  bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
  bool svg = true;
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  std::string experiment = "echo"; // echo | polarization | transverse | thermal | atoms | optimize | sweep
  std::string target;              // optimize/sweep: echo | polarization | transverse | thermal
  std::optional<CombConfig> comb;
  std::optional<DualCombConfig> dual_comb;
  std::optional<AtomConfig> atom;
  MediumConfig medium;
  GridConfig grid;
  PulseConfig pulse;
  std::optional<PolarizationConfig> polarization;
  std::optional<TransverseConfig> transverse;
  std::optional<ThermalConfig> thermal;
  OptimizerConfig optimizer;
  std::optional<SweepConfig> sweep;
  OutputConfig output;
  bool operator==(const RunConfig&) const = default;

  /// Physics that the run evaluates: the experiment itself or the target of
  /// an optimize/sweep run.
  const std::string& physics() const {
    return experiment == "optimize" || experiment == "sweep" ? target : experiment;
  }
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ConfigIssue {
  std::string path; // dotted key path, e.g. "comb.gamma_MHz"
  int line = 0;     // 1-based; 0 when unknown
  std::string message;

  std::string str() const {
    std::string s = path.empty() ? std::string("<root>") : path;
    if (line > 0) s += " (line " + std::to_string(line) + ")";
    return s + ": " + message;
  }
};

/// All problems found in one configuration.
struct ConfigError : std::runtime_error {
  std::vector<ConfigIssue> issues;
  explicit ConfigError(std::vector<ConfigIssue> is)
      : std::runtime_error(describe(is)), issues(std::move(is)) {}

  static std::string describe(const std::vector<ConfigIssue>& is) {
    std::string s = std::to_string(is.size()) + " configuration error(s):";
    for (const auto& i : is) s += "\n  " + i.str();
    return s;
  }
};

// ---------------------------------------------------------------------------
// Reading helpers
// ---------------------------------------------------------------------------

namespace detail {

enum class Check { any, positive, non_negative, at_least_one };

inline int line_of(const YAML::Node& n) {
  if (!n.IsDefined()) return 0;
  const YAML::Mark m = n.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// One YAML mapping being read; keys that are never requested are reported as
/// unknown by finish().
class Section {
 public:
  Section(std::vector<ConfigIssue>& issues, YAML::Node node, std::string path)
      : issues_(&issues), node_(std::move(node)), path_(std::move(path)) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
      error(path_, line_of(node_), "expected a mapping");
      node_ = YAML::Node();
    }
  }

  bool present() const { return node_.IsDefined() && !node_.IsNull(); }
  const std::string& path() const { return path_; }
  int line() const { return line_of(node_); }

  void error(const std::string& path, int line, const std::string& msg) const {
    issues_->push_back({path, line, msg});
  }

  YAML::Node raw(const std::string& key) {
    used_.insert(key);
    const YAML::Node& n = node_;
    return present() ? n[key] : YAML::Node(YAML::NodeType::Undefined);
  }

  bool has(const std::string& key) const {
    const YAML::Node& n = node_;
    return present() && n[key].IsDefined();
  }

  template <class T>
  bool get(const std::string& key, T& out, Check check = Check::any) {
    YAML::Node n = raw(key);
    if (!n.IsDefined()) return false;
    const std::string p = join(path_, key);
    T v{};
    try {
      v = n.as<T>();
    } catch (const YAML::Exception&) {
      error(p, line_of(n), "malformed value '" + scalar(n) + "'");
      return false;
    }
    if constexpr (std::is_arithmetic_v<T> && !std::is_same_v<T, bool>) {
      const double d = static_cast<double>(v);
      std::string bad;
      if (!std::isfinite(d)) bad = "must be finite";
      else if (check == Check::positive && !(d > 0)) bad = "must be > 0";
      else if (check == Check::non_negative && !(d >= 0)) bad = "must be >= 0";
      else if (check == Check::at_least_one && !(d >= 1)) bad = "must be >= 1";
      if (!bad.empty()) {
        error(p, line_of(n), bad + " (got " + scalar(n) + ")");
        return false;
      }
    }
    out = v;
    return true;
  }

  void choice(const std::string& key, std::string& out, const std::set<std::string>& allowed) {
    std::string v = out;
    if (!get(key, v)) return;
    if (!allowed.count(v)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      error(join(path_, key), line_of(raw(key)), "unknown value '" + v + "' (expected one of: " + list + ")");
      return;
    }
    out = v;
  }

  /// [lo, hi] pair with lo <= hi.
  void range(const std::string& key, std::optional<std::array<double, 2>>& out, Check check) {
    YAML::Node n = raw(key);
    if (!n.IsDefined()) return;
    const std::string p = join(path_, key);
    std::vector<double> v;
    try {
      v = n.as<std::vector<double>>();
    } catch (const YAML::Exception&) {
      error(p, line_of(n), "expected a [lo, hi] pair of numbers");
      return;
    }
    if (v.size() != 2 || !(v[0] <= v[1]) || !std::isfinite(v[0]) || !std::isfinite(v[1])) {
      error(p, line_of(n), "expected a finite [lo, hi] pair with lo <= hi");
      return;
    }
    if ((check == Check::positive && !(v[0] > 0)) || (check == Check::non_negative && !(v[0] >= 0))) {
      error(p, line_of(n), check == Check::positive ? "bounds must be > 0" : "bounds must be >= 0");
      return;
    }
    out = std::array<double, 2>{v[0], v[1]};
  }

  Section child(const std::string& key) { return Section(*issues_, raw(key), join(path_, key)); }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) error(join(path_, key), line_of(kv.first), "unknown key");
    }
  }

 private:
  static std::string scalar(const YAML::Node& n) {
    if (n.IsScalar()) return n.Scalar();
    std::stringstream ss;
    ss << n;
    return ss.str();
  }

  std::vector<ConfigIssue>* issues_;
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

/// Linewidth given either as a rate (gamma_per_us, µs⁻¹) or as a cyclic
/// frequency (gamma_MHz, converted as γ = 2π·f).  Only one may be present.
inline void read_gamma(Section& s, double& gamma_per_us) {
  const bool rate = s.has("gamma_per_us"), cyclic = s.has("gamma_MHz");
  if (rate && cyclic) {
    s.raw("gamma_MHz");
    s.error(join(s.path(), "gamma_MHz"), s.line(), "give either gamma_per_us or gamma_MHz, not both");
    return;
  }
  if (cyclic) {
    double f = 0.0;
    if (s.get("gamma_MHz", f, Check::positive)) gamma_per_us = 2.0 * std::numbers::pi * f;
    return;
  }
  s.get("gamma_per_us", gamma_per_us, Check::positive);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline const std::set<std::string>& experiments() {
  static const std::set<std::string> e{"echo",    "polarization", "transverse", "thermal",
                                       "atoms",   "optimize",     "sweep"};
  return e;
}

/// Parse and fully validate; throws ConfigError listing every problem.
inline RunConfig parse_config(const std::string& text) {
  using detail::Check;
  using detail::Section;
  std::vector<ConfigIssue> issues;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{"", e.mark.line + 1, "YAML syntax error: " + e.msg}});
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  Section top(issues, root, "");
  if (!top.present()) throw ConfigError(std::move(issues));

  RunConfig c;
  if (!top.has("experiment")) top.error("experiment", 0, "missing required key");
  top.choice("experiment", c.experiment, experiments());
  if (c.experiment == "optimize" || c.experiment == "sweep") {
    if (!top.has("target")) top.error("target", 0, "missing required key for " + c.experiment + " runs");
    c.target = "echo";
    top.choice("target", c.target, {"echo", "polarization", "transverse", "thermal"});
  } else if (top.has("target")) {
    top.raw("target");
    top.error("target", 0, "only optimize and sweep runs take a target");
  }

  if (auto s = top.child("comb"); s.present()) {
    CombConfig v;
    s.choice("kind", v.kind, {"ideal", "explicit"});
    s.get("teeth", v.teeth, Check::at_least_one);
    s.get("spacing_MHz", v.spacing_mhz, Check::positive);
    detail::read_gamma(s, v.gamma_per_us);
    s.get("optical_depth", v.optical_depth, Check::non_negative);
    YAML::Node list = s.raw("list");
    if (list.IsDefined()) {
      if (!list.IsSequence()) {
        s.error(detail::join(s.path(), "list"), detail::line_of(list), "expected a list of teeth");
      } else {
        for (std::size_t i = 0; i < list.size(); ++i) {
          Section t(issues, list[i], detail::join(s.path(), "list[" + std::to_string(i) + "]"));
          ToothConfig tc;
          t.get("detuning_MHz", tc.detuning_mhz);
          t.get("weight", tc.weight, Check::non_negative);
          detail::read_gamma(t, tc.gamma_per_us);
          t.finish();
          v.list.push_back(tc);
        }
      }
    }
    if (v.kind == "explicit" && v.list.empty())
      s.error(detail::join(s.path(), "list"), s.line(), "explicit comb needs at least one tooth");
    s.finish();
    c.comb = v;
  }
  if (auto s = top.child("dual_comb"); s.present()) {
    DualCombConfig v;
    s.get("teeth", v.teeth, Check::at_least_one);
    s.get("spacing_MHz", v.spacing_mhz, Check::positive);
    detail::read_gamma(s, v.gamma_per_us);
    s.get("optical_depth", v.optical_depth, Check::non_negative);
    s.get("shift_GHz", v.shift_ghz);
    s.finish();
    c.dual_comb = v;
  }
  if (auto s = top.child("atom"); s.present()) {
    AtomConfig v;
    s.choice("name", v.name, {"cs", "rb", "rb87"});
    s.get("data_file", v.data_file);
    s.get("field_T", v.field_t, Check::positive);
    s.choice("manifold", v.manifold, {"upper", "lower", "all"});
    detail::read_gamma(s, v.gamma_per_us);
    s.get("optical_depth", v.optical_depth, Check::positive);
    s.finish();
    c.atom = v;
  }
  if (auto s = top.child("medium"); true) {
    s.get("length_m", c.medium.length_m, Check::positive);
    s.finish();
  }
  if (auto s = top.child("grid"); true) {
    s.get("span_factor", c.grid.span_factor, Check::positive);
    s.get("width_factor", c.grid.width_factor, Check::positive);
    s.get("points_per_linewidth", c.grid.points_per_linewidth, Check::positive);
    s.finish();
  }
  if (auto s = top.child("pulse"); true) {
    s.get("width_GHz", c.pulse.width_ghz, Check::positive);
    s.get("mean_GHz", c.pulse.mean_ghz);
    s.get("weight_scale", c.pulse.weight_scale, Check::non_negative);
    s.finish();
  }
  if (auto s = top.child("polarization"); s.present()) {
    PolarizationConfig v;
    s.choice("input", v.input, {"H", "V", "D", "A", "R", "L"});
    s.get("plate_phase", v.plate_phase);
    s.get("plate_delay_ns", v.plate_delay_ns);
    s.finish();
    c.polarization = v;
  }
  if (auto s = top.child("transverse"); s.present()) {
    TransverseConfig v;
    s.get("w0_mm", v.w0_mm, Check::positive);
    s.get("wavelength_nm", v.wavelength_nm, Check::positive);
    s.get("grid_points", v.grid_points, Check::at_least_one);
    s.get("extent_w0", v.extent_w0, Check::positive);
    YAML::Node modes = s.raw("modes");
    if (modes.IsDefined()) {
      v.modes.clear();
      if (!modes.IsSequence() || modes.size() == 0) {
        s.error(detail::join(s.path(), "modes"), detail::line_of(modes), "expected a non-empty list of modes");
      } else {
        for (std::size_t i = 0; i < modes.size(); ++i) {
          Section m(issues, modes[i], detail::join(s.path(), "modes[" + std::to_string(i) + "]"));
          ModeConfig mc;
          m.get("ell", mc.ell);
          m.get("p", mc.p, Check::non_negative);
          m.get("re", mc.re);
          m.get("im", mc.im);
          m.finish();
          v.modes.push_back(mc);
        }
      }
    }
    s.choice("density", v.density, {"homogeneous", "gaussian"});
    s.get("density_waist_ratio", v.density_waist_ratio, Check::positive);
    s.get("nz", v.nz, Check::at_least_one);
    s.get("check_convergence", v.check_convergence);
    s.finish();
    c.transverse = v;
  }
  if (auto s = top.child("thermal"); s.present()) {
    ThermalConfig v;
    s.get("temperature_K", v.temperature_k, Check::non_negative);
    s.get("mass_amu", v.mass_amu, Check::positive);
    s.get("fit_const", v.fit_const, Check::positive);
    s.get("nodes", v.nodes, Check::at_least_one);
    s.finish();
    c.thermal = v;
  }
  if (auto s = top.child("optimizer"); true) {
    auto& v = c.optimizer;
    s.choice("mode", v.mode, {"width-and-mean", "mean-only", "weight-too"});
    s.get("coarse_points", v.coarse_points, Check::non_negative);
    s.get("tolerance", v.tolerance, Check::positive);
    s.get("max_iterations", v.max_iterations, Check::at_least_one);
    s.range("width_GHz", v.width_ghz, Check::positive);
    s.range("mean_GHz", v.mean_ghz, Check::any);
    s.range("weight", v.weight, Check::non_negative);
    s.finish();
  }
  if (auto s = top.child("sweep"); s.present()) {
    SweepConfig v;
    s.choice("axis", v.axis, {"lambda", "ell", "temperature", "width", "mean", "weight",
                              "optical_depth", "density_waist", "field"});
    YAML::Node vals = s.raw("values");
    if (vals.IsDefined()) {
      try {
        v.values = vals.as<std::vector<double>>();
        for (double x : v.values)
          if (!std::isfinite(x)) throw YAML::Exception(vals.Mark(), "non-finite");
      } catch (const YAML::Exception&) {
        s.error(detail::join(s.path(), "values"), detail::line_of(vals), "expected a list of finite numbers");
      }
    }
    s.finish();
    c.sweep = v;
  }
  if (auto s = top.child("output"); true) {
    s.get("svg", c.output.svg);
    s.finish();
  }
  top.finish();

  // Sections each experiment needs.
  auto need = [&](bool ok, const std::string& section) {
    if (!ok) top.error(section, 0, "missing section required by the '" + c.experiment + "' experiment");
  };
  const std::string& phys = c.physics();
  if (c.experiment == "atoms") need(c.atom.has_value(), "atom");
  if (phys == "echo") need(c.comb.has_value(), "comb");
  if (phys == "polarization") need(c.dual_comb || c.atom, "dual_comb");
  if (phys == "transverse" || phys == "thermal") {
    need(c.comb.has_value(), "comb");
    need(c.transverse.has_value(), "transverse");
  }
  if (phys == "thermal") need(c.thermal.has_value(), "thermal");
  if (c.experiment == "sweep") need(c.sweep.has_value(), "sweep");
  if (c.dual_comb && c.atom && phys == "polarization")
    top.error("atom", 0, "give either dual_comb or atom for polarization runs, not both");

  if (!issues.empty()) throw ConfigError(std::move(issues));
  // Sections with defaults that the physics reads are made explicit so that
  // serialization echoes them.
  if (phys == "polarization" && !c.polarization) c.polarization = PolarizationConfig{};
  return c;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Canonical YAML for a configuration: fixed key order, every field of every
/// present section, 17 significant digits.  parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "experiment" << YAML::Value << c.experiment;
  if (!c.target.empty()) e << YAML::Key << "target" << YAML::Value << c.target;
  auto pair = [&](const char* key, const std::optional<std::array<double, 2>>& r) {
    if (!r) return;
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << (*r)[0] << (*r)[1]
      << YAML::EndSeq;
  };
  if (c.comb) {
    const auto& v = *c.comb;
    e << YAML::Key << "comb" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << v.kind;
    e << YAML::Key << "teeth" << YAML::Value << v.teeth;
    e << YAML::Key << "spacing_MHz" << YAML::Value << v.spacing_mhz;
    e << YAML::Key << "gamma_per_us" << YAML::Value << v.gamma_per_us;
    e << YAML::Key << "optical_depth" << YAML::Value << v.optical_depth;
    if (!v.list.empty()) {
      e << YAML::Key << "list" << YAML::Value << YAML::BeginSeq;
      for (const auto& t : v.list)
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "detuning_MHz" << YAML::Value
          << t.detuning_mhz << YAML::Key << "weight" << YAML::Value << t.weight << YAML::Key
          << "gamma_per_us" << YAML::Value << t.gamma_per_us << YAML::EndMap;
      e << YAML::EndSeq;
    }
    e << YAML::EndMap;
  }
  if (c.dual_comb) {
    const auto& v = *c.dual_comb;
    e << YAML::Key << "dual_comb" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "teeth" << YAML::Value << v.teeth;
    e << YAML::Key << "spacing_MHz" << YAML::Value << v.spacing_mhz;
    e << YAML::Key << "gamma_per_us" << YAML::Value << v.gamma_per_us;
    e << YAML::Key << "optical_depth" << YAML::Value << v.optical_depth;
    e << YAML::Key << "shift_GHz" << YAML::Value << v.shift_ghz;
    e << YAML::EndMap;
  }
  if (c.atom) {
    const auto& v = *c.atom;
    e << YAML::Key << "atom" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << v.name;
    if (!v.data_file.empty()) e << YAML::Key << "data_file" << YAML::Value << v.data_file;
    e << YAML::Key << "field_T" << YAML::Value << v.field_t;
    e << YAML::Key << "manifold" << YAML::Value << v.manifold;
    e << YAML::Key << "gamma_per_us" << YAML::Value << v.gamma_per_us;
    e << YAML::Key << "optical_depth" << YAML::Value << v.optical_depth;
    e << YAML::EndMap;
  }
  e << YAML::Key << "medium" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "length_m" << YAML::Value << c.medium.length_m << YAML::EndMap;
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "span_factor" << YAML::Value << c.grid.span_factor;
  e << YAML::Key << "width_factor" << YAML::Value << c.grid.width_factor;
  e << YAML::Key << "points_per_linewidth" << YAML::Value << c.grid.points_per_linewidth
    << YAML::EndMap;
  e << YAML::Key << "pulse" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "width_GHz" << YAML::Value << c.pulse.width_ghz;
  e << YAML::Key << "mean_GHz" << YAML::Value << c.pulse.mean_ghz;
  e << YAML::Key << "weight_scale" << YAML::Value << c.pulse.weight_scale << YAML::EndMap;
  if (c.polarization) {
    const auto& v = *c.polarization;
    e << YAML::Key << "polarization" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "input" << YAML::Value << v.input;
    e << YAML::Key << "plate_phase" << YAML::Value << v.plate_phase;
    e << YAML::Key << "plate_delay_ns" << YAML::Value << v.plate_delay_ns;
    e << YAML::EndMap;
  }
  if (c.transverse) {
    const auto& v = *c.transverse;
    e << YAML::Key << "transverse" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "w0_mm" << YAML::Value << v.w0_mm;
    e << YAML::Key << "wavelength_nm" << YAML::Value << v.wavelength_nm;
    e << YAML::Key << "grid_points" << YAML::Value << v.grid_points;
    e << YAML::Key << "extent_w0" << YAML::Value << v.extent_w0;
    e << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
    for (const auto& m : v.modes)
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "ell" << YAML::Value << m.ell << YAML::Key
        << "p" << YAML::Value << m.p << YAML::Key << "re" << YAML::Value << m.re << YAML::Key
        << "im" << YAML::Value << m.im << YAML::EndMap;
    e << YAML::EndSeq;
    e << YAML::Key << "density" << YAML::Value << v.density;
    e << YAML::Key << "density_waist_ratio" << YAML::Value << v.density_waist_ratio;
    e << YAML::Key << "nz" << YAML::Value << v.nz;
    e << YAML::Key << "check_convergence" << YAML::Value << v.check_convergence;
    e << YAML::EndMap;
  }
  if (c.thermal) {
    const auto& v = *c.thermal;
    e << YAML::Key << "thermal" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "temperature_K" << YAML::Value << v.temperature_k;
    e << YAML::Key << "mass_amu" << YAML::Value << v.mass_amu;
    e << YAML::Key << "fit_const" << YAML::Value << v.fit_const;
    e << YAML::Key << "nodes" << YAML::Value << v.nodes;
    e << YAML::EndMap;
  }
  {
    const auto& v = c.optimizer;
    e << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "mode" << YAML::Value << v.mode;
    e << YAML::Key << "coarse_points" << YAML::Value << v.coarse_points;
    e << YAML::Key << "tolerance" << YAML::Value << v.tolerance;
    e << YAML::Key << "max_iterations" << YAML::Value << v.max_iterations;
    pair("width_GHz", v.width_ghz);
    pair("mean_GHz", v.mean_ghz);
    pair("weight", v.weight);
    e << YAML::EndMap;
  }
  if (c.sweep) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "axis" << YAML::Value << c.sweep->axis;
    e << YAML::Key << "values" << YAML::Value << YAML::Flow << c.sweep->values;
    e << YAML::EndMap;
  }
  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "svg" << YAML::Value << c.output.svg << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

/// 64-bit FNV-1a hash, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string config_hash(const RunConfig& c) { return fnv1a_hex(serialize(c)); }

} // namespace iafc::io
