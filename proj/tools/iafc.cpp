// iafc.cpp
// --------
// Command-line front end.  Each subcommand reads a YAML run configuration,
// runs one experiment and writes CSV (and optional SVG) artifacts:
//
//     iafc echo         --config run.yaml --out results/
//     iafc optimize     --config run.yaml --mode width-and-mean --out results/
//     iafc sweep        --config run.yaml --axis lambda --out results/
//     iafc atoms make-comb --atom cs --B 0.05 --out results/
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
// error.

#include "iafc/io/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

enum Exit { ok = 0, io_failure = 1, config_error = 2, numerical_error = 3 };

struct Common {
  std::string config;
  std::string out = ".";
  int threads = 1;
  bool no_timestamp = false;
  long long seed = 0; // reserved: every computation is deterministic
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config, "YAML run configuration");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads for transverse propagation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--no-timestamp", c.no_timestamp, "omit the generation time from CSV headers");
  app->add_option("--seed", c.seed, "reserved; all computations are deterministic");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw iafc::io::ConfigError({{path, 0, "cannot open configuration file"}});
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Re-validates a configuration after command-line overrides.
iafc::io::RunConfig revalidate(const iafc::io::RunConfig& c) {
  return iafc::io::parse_config(iafc::io::serialize(c));
}

int execute(const std::function<iafc::io::RunConfig()>& make_config, const Common& common) {
  try {
    const auto cfg = make_config();
    iafc::io::RunOptions opt;
    opt.threads = common.threads;
    opt.timestamp = !common.no_timestamp;
    const auto result = iafc::io::run(cfg, opt);
    iafc::io::write_artifacts(common.out, result.artifacts);
    for (const auto& line : result.summary) std::cout << line << "\n";
    for (const auto& a : result.artifacts) std::cout << "wrote " << common.out << "/" << a.filename << "\n";
    return ok;
  } catch (const iafc::io::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const iafc::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return config_error;
  } catch (const iafc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io_failure;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"I-AFC quantum-memory simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("iafc ") + iafc::io::tool_version);

  std::map<std::string, Common> commons;
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"echo", "polarization", "transverse", "thermal", "optimize", "sweep"}) {
    subs[name] = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_common(subs[name], commons[name], true);
  }
  subs["echo"]->description("scalar comb storage: echo traces and figures of merit");
  subs["polarization"]->description("dual-comb polarization storage");
  subs["transverse"]->description("LG-mode storage with diffraction and density profiles");
  subs["thermal"]->description("LG-mode storage in a thermal vapor");
  subs["optimize"]->description("optimize the input pulse for the configured target");
  subs["sweep"]->description("optimize along one parameter axis");

  std::string mode;
  subs["optimize"]->add_option("--mode", mode, "width-and-mean | mean-only | weight-too");
  std::string axis;
  std::vector<double> values;
  subs["sweep"]->add_option("--axis", axis, "sweep axis (overrides sweep.axis)");
  subs["sweep"]->add_option("--values", values, "sweep values (overrides sweep.values)");

  auto* atoms = app.add_subcommand("atoms", "atomic dual combs");
  atoms->require_subcommand(1);
  auto* make_comb = atoms->add_subcommand("make-comb", "emit the dual comb of an atom as CSV");
  Common atom_common;
  add_common(make_comb, atom_common, false);
  std::string atom_name = "cs";
  double field = 0.05;
  make_comb->add_option("--atom", atom_name, "cs | rb")->capture_default_str();
  make_comb->add_option("--B", field, "magnetic field, tesla")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    const Common& common = commons[name];
    return execute(
        [&] {
          auto cfg = iafc::io::parse_config(read_file(common.config));
          if (cfg.experiment != name)
            throw iafc::io::ConfigError(
                {{"experiment", 0, "configuration is for '" + cfg.experiment + "' but the '" + name +
                                       "' subcommand was used"}});
          if (!mode.empty()) cfg.optimizer.mode = mode;
          if (!axis.empty() && cfg.sweep) cfg.sweep->axis = axis;
          if (!values.empty() && cfg.sweep) cfg.sweep->values = values;
          return revalidate(cfg);
        },
        common);
  }
  if (make_comb->parsed()) {
    return execute(
        [&] {
          iafc::io::RunConfig cfg;
          if (!atom_common.config.empty()) {
            cfg = iafc::io::parse_config(read_file(atom_common.config));
          } else {
            cfg.experiment = "atoms";
            cfg.atom = iafc::io::AtomConfig{};
          }
          if (cfg.experiment != "atoms" || !cfg.atom)
            throw iafc::io::ConfigError({{"experiment", 0, "make-comb needs an atoms configuration"}});
          if (make_comb->count("--atom")) cfg.atom->name = atom_name;
          if (make_comb->count("--B")) cfg.atom->field_t = field;
          return revalidate(cfg);
        },
        atom_common);
  }
  return config_error;
}
