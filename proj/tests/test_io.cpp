// Tests for configuration parsing and serialization, atomic-data files, the
// run pipeline and artifact emission.

#include "iafc/io/atom_data.hpp"
#include "iafc/io/run.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace iafc;
using namespace iafc::io;

namespace {

const char* kEcho = R"(experiment: echo
comb:
  kind: ideal
  teeth: 9
  spacing_MHz: 400
  gamma_per_us: 5
  optical_depth: 2
pulse:
  width_GHz: 0.5
)";

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues;
  }
  return {};
}

bool has_issue(const std::vector<ConfigIssue>& is, const std::string& path, int line = -1) {
  for (const auto& i : is)
    if (i.path == path && (line < 0 || i.line == line)) return true;
  return false;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("iafc_test_io_" + name);
  std::filesystem::remove_all(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Random but valid configuration touching every section and field type.
RunConfig random_config(std::mt19937_64& g) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); };
  auto n = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); };
  RunConfig c;
  const std::vector<std::string> targets{"echo", "polarization", "transverse", "thermal"};
  c.experiment = n(0, 1) ? "optimize" : "sweep";
  c.target = targets[static_cast<std::size_t>(n(0, 3))];
  c.medium.length_m = u(1e-3, 0.1);
  c.grid = {u(1, 8), u(2, 10), u(1, 12)};
  c.pulse = {u(0.1, 3), u(-1, 1), u(0.5, 2)};
  c.optimizer.mode = std::vector<std::string>{"mean-only", "weight-too", "width-and-mean"}[static_cast<std::size_t>(n(0, 2))];
  c.optimizer.coarse_points = n(0, 9);
  c.optimizer.tolerance = u(1e-8, 1e-2);
  c.optimizer.max_iterations = n(1, 1000);
  if (n(0, 1)) c.optimizer.width_ghz = std::array<double, 2>{u(0.1, 0.5), u(0.6, 2)};
  if (n(0, 1)) c.optimizer.mean_ghz = std::array<double, 2>{u(-1, 0), u(0, 1)};
  if (n(0, 1)) c.optimizer.weight = std::array<double, 2>{u(0.1, 1), u(1, 10)};
  c.output.svg = n(0, 1) == 1;
  if (c.target == "polarization") {
    if (n(0, 1)) {
      c.dual_comb = DualCombConfig{n(2, 20), u(100, 800), u(0.1, 20), u(0.1, 5), u(-3, 3)};
    } else {
      c.atom = AtomConfig{n(0, 1) ? "cs" : "rb87", "", u(0.01, 0.2),
                          std::vector<std::string>{"upper", "lower", "all"}[static_cast<std::size_t>(n(0, 2))],
                          u(0.1, 20), u(0.1, 5)};
    }
    c.polarization = PolarizationConfig{std::vector<std::string>{"H", "V", "D", "A", "R", "L"}[static_cast<std::size_t>(n(0, 5))],
                                        u(-3, 3), u(0, 2)};
  } else {
    CombConfig cc;
    if (n(0, 1)) {
      cc.kind = "explicit";
      for (int k = n(1, 5); k > 0; --k) cc.list.push_back({u(-2000, 2000), u(1e6, 1e9), u(0.1, 20)});
    } else {
      cc = CombConfig{"ideal", n(1, 15), u(100, 800), u(0.1, 20), u(0.1, 5), {}};
    }
    c.comb = cc;
  }
  if (c.target == "transverse" || c.target == "thermal") {
    TransverseConfig t;
    t.w0_mm = u(0.5, 8);
    t.wavelength_nm = u(300, 900);
    t.grid_points = 2 * n(8, 64);
    t.extent_w0 = u(4, 20);
    t.modes.clear();
    for (int k = n(1, 3); k > 0; --k) t.modes.push_back({n(-10, 10), n(0, 2), u(-1, 1), u(-1, 1)});
    t.density = c.target == "transverse" && n(0, 1) ? "gaussian" : "homogeneous";
    t.density_waist_ratio = u(0.2, 2);
    t.nz = n(1, 64);
    t.check_convergence = n(0, 1) == 1;
    c.transverse = t;
  }
  if (c.target == "thermal") c.thermal = ThermalConfig{u(0, 20), u(1, 200), u(0.5, 1), n(1, 9)};
  if (c.experiment == "sweep") {
    SweepConfig s;
    s.axis = "weight";
    for (int k = n(1, 6); k > 0; --k) s.values.push_back(u(0.1, 5));
    c.sweep = s;
  }
  return c;
}

} // namespace

// ---------------------------------------------------------------------------
// Parsing and validation
// ---------------------------------------------------------------------------

TEST(Config, MinimalEchoConfigUsesDocumentedDefaults) {
  const RunConfig c = parse_config(kEcho);
  ASSERT_TRUE(c.comb.has_value());
  EXPECT_EQ(c.experiment, "echo");
  EXPECT_EQ(c.comb->teeth, 9);
  EXPECT_DOUBLE_EQ(c.medium.length_m, 0.01);
  EXPECT_DOUBLE_EQ(c.pulse.mean_ghz, 0.0);
  EXPECT_EQ(c.optimizer.mode, "width-and-mean");
  EXPECT_FALSE(c.dual_comb || c.atom || c.transverse || c.thermal || c.sweep);
}

TEST(Config, CyclicLinewidthIsConvertedToARate) {
  std::string text = kEcho;
  text.replace(text.find("gamma_per_us: 5"), 15, "gamma_MHz: 5");
  const RunConfig c = parse_config(text);
  EXPECT_NEAR(c.comb->gamma_per_us, two_pi * 5.0, 1e-12);
}

TEST(Config, NegativeLinewidthNamesTheKeyAndLine) {
  std::string text = kEcho;
  text.replace(text.find("gamma_per_us: 5"), 15, "gamma_MHz: -5");
  const auto is = issues_of(text);
  ASSERT_EQ(is.size(), 1u);
  EXPECT_EQ(is[0].path, "comb.gamma_MHz");
  EXPECT_EQ(is[0].line, 6);
  EXPECT_NE(is[0].message.find("> 0"), std::string::npos);
  EXPECT_NE(is[0].str().find("comb.gamma_MHz (line 6)"), std::string::npos);
}

TEST(Config, AllProblemsAreReportedTogether) {
  const std::string text = R"(experiment: polarization
dual_comb:
  teeth: 0
  spacing_MHz: 400
  colour: blue
pulse:
  width_GHz: -1
optimizer:
  mode: fastest
)";
  const auto is = issues_of(text);
  EXPECT_TRUE(has_issue(is, "dual_comb.teeth", 3));
  EXPECT_TRUE(has_issue(is, "dual_comb.colour", 5));
  EXPECT_TRUE(has_issue(is, "pulse.width_GHz", 7));
  EXPECT_TRUE(has_issue(is, "optimizer.mode", 9));
  EXPECT_EQ(is.size(), 4u);
}

TEST(Config, MissingSectionsAndTargetsAreRejected) {
  EXPECT_FALSE(issues_of("experiment: transverse\ncomb: {teeth: 3}\n").empty());
  EXPECT_FALSE(issues_of("experiment: echo\n").empty());
  EXPECT_FALSE(issues_of("experiment: optimize\ncomb: {teeth: 3}\n").empty());
  EXPECT_FALSE(issues_of("experiment: teleport\n").empty());
  EXPECT_FALSE(issues_of("experiment: sweep\ntarget: echo\ncomb: {teeth: 3}\n").empty());
  // A polarization run takes either an ideal dual comb or an atom, not both.
  EXPECT_FALSE(issues_of("experiment: polarization\ndual_comb: {}\natom: {}\n").empty());
  EXPECT_TRUE(issues_of("experiment: polarization\natom: {name: rb87}\n").empty());
  // Both linewidth spellings at once are ambiguous.
  EXPECT_FALSE(issues_of("experiment: echo\ncomb: {gamma_MHz: 1, gamma_per_us: 1}\n").empty());
  EXPECT_THROW(parse_config("experiment: [echo"), ConfigError);
}

TEST(Config, SerializationRoundTripsRandomConfigurations) {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const RunConfig c = random_config(g);
    const std::string y = serialize(c);
    RunConfig back;
    ASSERT_NO_THROW(back = parse_config(y)) << y;
    EXPECT_TRUE(back == c) << y;
    EXPECT_EQ(serialize(back), y);
  }
}

TEST(Config, HashIsDeterministicAndSensitive) {
  const RunConfig a = parse_config(kEcho);
  const RunConfig b = parse_config(serialize(a));
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  RunConfig c = a;
  c.pulse.width_ghz = std::nextafter(c.pulse.width_ghz, 1.0);
  EXPECT_NE(config_hash(a), config_hash(c));
  // FNV-1a 64 reference values.
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

// ---------------------------------------------------------------------------
// Atomic data files
// ---------------------------------------------------------------------------

TEST(AtomData, ShippedFilesMatchBuiltInTables) {
  const std::string dir = IAFC_DATA_DIR;
  const AtomData cs = load_atom_data(dir + "/cs.yaml");
  const AtomData rb = load_atom_data(dir + "/rb87.yaml");
  for (const auto& [file, ref] : {std::pair{cs, cesium_data()}, std::pair{rb, rubidium87_data()}}) {
    EXPECT_EQ(file.atom, ref.atom);
    EXPECT_EQ(file.two_j_ground, ref.two_j_ground);
    EXPECT_EQ(file.two_j_excited, ref.two_j_excited);
    EXPECT_EQ(file.two_i, ref.two_i);
    EXPECT_DOUBLE_EQ(file.a_ground_mhz, ref.a_ground_mhz);
    EXPECT_DOUBLE_EQ(file.a_excited_mhz, ref.a_excited_mhz);
    EXPECT_DOUBLE_EQ(file.b_excited_mhz, ref.b_excited_mhz);
    EXPECT_DOUBLE_EQ(file.gj_ground, ref.gj_ground);
    EXPECT_DOUBLE_EQ(file.gj_excited, ref.gj_excited);
    EXPECT_DOUBLE_EQ(file.g_i, ref.g_i);
    EXPECT_DOUBLE_EQ(file.mass_amu, ref.mass_amu);
    EXPECT_DOUBLE_EQ(file.lambda_nm, ref.lambda_nm);
  }
}

TEST(AtomData, MalformedFilesAreRejected) {
  EXPECT_THROW(parse_atom_data("atom: x\n"), ConfigError);
  EXPECT_THROW(load_atom_data("/nonexistent/atom.yaml"), ConfigError);
  const std::string dir = IAFC_DATA_DIR;
  std::string text = slurp(dir + "/cs.yaml");
  const auto pos = text.find("J_g:");
  text.replace(pos, text.find('\n', pos) - pos, "J_g: 1/3");
  EXPECT_THROW(parse_atom_data(text), ConfigError);
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

TEST(Pipeline, IdealEchoAppearsAtTheCombPeriod) {
  const RunResult r = run(parse_config(kEcho), {1, false});
  ASSERT_GE(r.tables.size(), 2u);
  const Table& s = r.tables[0];
  EXPECT_EQ(s.name, "summary");
  EXPECT_EQ(s.rows.size(), 1u);
  EXPECT_NEAR(s.rows[0][s.column("echo_time_ns")], 2.5, 0.1);
  EXPECT_GT(s.rows[0][s.column("eta")], 0.5);
  EXPECT_GT(s.rows[0][s.column("fidelity")], 0.99);
  EXPECT_EQ(r.tables[1].name, "traces");
}

TEST(Pipeline, LambdaSweepMatchesDirectShiftSweep) {
  const std::string text = R"(experiment: sweep
target: polarization
dual_comb: {teeth: 5, spacing_MHz: 400, gamma_per_us: 5, optical_depth: 2}
polarization: {input: H}
optimizer: {mode: width-and-mean, coarse_points: 3, max_iterations: 60}
sweep: {axis: lambda, values: [0, 1.0]}
)";
  const RunConfig c = parse_config(text);
  const Table t = run(c, {1, false}).tables.at(0);

  const double delta = mhz(400.0);
  const auto comb = make_ideal_comb(5, delta, 5e6, weight_for_mean_optical_depth(2.0, delta, 0.01));
  const DualComb dc(comb, comb, {}, 0.0);
  ShiftSweepSettings s;
  s.bounds = default_bounds(dc.union_comb().span());
  s.input = polarization_state("H");
  s.optimizer.coarse_points = 3;
  s.optimizer.max_iterations = 60;
  const std::vector<double> shifts{0.0, ghz(1.0)};
  const auto rows = sweep_shift(dc, 0.01, shifts, ShiftSweepMode::optimize_width_and_mean, s);
  ASSERT_EQ(t.rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(t.rows[i][t.column("eta")], rows[i].result.report.efficiency, 1e-12);
    EXPECT_NEAR(t.rows[i][t.column("fidelity")], rows[i].result.report.fidelity, 1e-12);
  }
}

TEST(Pipeline, SweepAxisMustSuitTheTarget) {
  RunConfig c = parse_config(std::string(kEcho) + "optimizer: {max_iterations: 5}\n");
  c.experiment = "sweep";
  c.target = "echo";
  c.sweep = SweepConfig{"ell", {1.0}};
  EXPECT_THROW(run(c, {1, false}), ConfigError);
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

TEST(Artifacts, OutputIsByteIdenticalWithoutTimestamp) {
  const RunConfig c = parse_config(kEcho);
  const auto a = run(c, {1, false}).artifacts;
  const auto b = run(c, {1, false}).artifacts;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].filename, b[i].filename);
    EXPECT_EQ(a[i].content, b[i].content);
  }
  const auto d1 = fresh_dir("bytes1"), d2 = fresh_dir("bytes2");
  write_artifacts(d1, a);
  write_artifacts(d2, b);
  for (const auto& art : a) EXPECT_EQ(slurp(d1 / art.filename), slurp(d2 / art.filename));
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST(Artifacts, CsvHeaderIdentifiesTheRun) {
  const RunConfig c = parse_config(kEcho);
  const auto arts = run(c, {1, true}).artifacts;
  ASSERT_FALSE(arts.empty());
  const std::string& csv = arts[0].content;
  EXPECT_EQ(arts[0].filename, "echo_summary.csv");
  EXPECT_EQ(csv.rfind("# iafc ", 0), 0u);
  EXPECT_NE(csv.find("# config_hash: " + config_hash(c)), std::string::npos);
  EXPECT_NE(csv.find("# generated: "), std::string::npos);
  EXPECT_NE(csv.find("#     spacing_MHz: 400\n"), std::string::npos);
  // The embedded configuration reproduces the run.
  std::string embedded;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("#   ", 0) == 0) embedded += line.substr(4) + "\n";
  EXPECT_TRUE(parse_config(embedded) == c);
}

TEST(Artifacts, SvgPlotsAreWellFormed) {
  const auto arts = run(parse_config(kEcho), {1, false}).artifacts;
  int svgs = 0;
  for (const auto& a : arts) {
    if (a.filename.size() < 4 || a.filename.substr(a.filename.size() - 4) != ".svg") continue;
    ++svgs;
    EXPECT_EQ(a.content.rfind("<svg ", 0), 0u);
    EXPECT_NE(a.content.find("</svg>"), std::string::npos);
    EXPECT_NE(a.content.find("<polyline"), std::string::npos);
    EXPECT_EQ(a.content.find("nan"), std::string::npos);
  }
  EXPECT_EQ(svgs, 1);
  RunConfig quiet = parse_config(std::string(kEcho) + "output: {svg: false}\n");
  for (const auto& a : run(quiet, {1, false}).artifacts) EXPECT_EQ(a.filename.find(".svg"), std::string::npos);
}

TEST(Artifacts, FailedWriteLeavesNoFiles) {
  const auto d = fresh_dir("fail");
  std::vector<Artifact> arts{{"a.csv", "1\n"}, {"missing_dir/b.csv", "2\n"}};
  EXPECT_THROW(write_artifacts(d, arts), std::runtime_error);
  EXPECT_TRUE(std::filesystem::is_empty(d));
  std::filesystem::remove_all(d);
}

TEST(Artifacts, AtomCombTableListsBothCircularComponents) {
  const RunConfig c = parse_config("experiment: atoms\natom: {name: rb87, field_T: 0.06}\n");
  const Table t = run(c, {1, false}).tables.at(0);
  int plus = 0, minus = 0;
  for (const auto& r : t.rows) (r[t.column("q")] > 0 ? plus : minus)++;
  EXPECT_GT(plus, 0);
  EXPECT_GT(minus, 0);
  EXPECT_EQ(plus + minus, static_cast<int>(t.rows.size()));
}
