// Command-line harness around the mdscache library: coverage estimation,
// optimal placement, single-point rate evaluation and figure-style sweeps.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdscache/experiment.hpp"
#include "mdscache/optimizer.hpp"

namespace {

using namespace mdscache;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct CommonOptions {
  ExperimentConfig config;
  std::string config_path;
  std::string gamma_path;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "JSON config file (flags override it)");
    cmd.add_option("-d,--grid-spacing", config.topology.grid_spacing,
                   "SBS grid spacing in meters");
    cmd.add_option("-D,--macro-radius", config.topology.macro_radius,
                   "macro-cell radius in meters");
    cmd.add_option("-r,--coverage-radius", config.topology.coverage_radius,
                   "SBS coverage radius in meters");
    cmd.add_option("--density", config.topology.user_density,
                   "user density per square meter");
    cmd.add_option("-N,--files", config.n_files, "library size");
    cmd.add_option("-a,--alpha", config.alpha, "Zipf skewness");
    cmd.add_option("-M,--cache", config.cache_files, "cache size in files");
    cmd.add_option("--strategies", config.strategies,
                   "subset of opt,pop,unif,prop");
    cmd.add_option("--codings", config.codings, "subset of mds,uncoded");
    cmd.add_option("--gamma-samples", config.gamma_samples,
                   "Monte Carlo samples for the coverage profile");
    cmd.add_option("--sim-samples", config.sim_samples,
                   "simulated requests per row (0 = analytic only)");
    cmd.add_option("-n,--fragments", config.n_fragments,
                   "fragments per file for simulation");
    cmd.add_option("--seed", config.seed, "random seed");
    cmd.add_option("-o,--output", config.output, "output path (default stdout)");
    cmd.add_option("--gamma-file", gamma_path,
                   "reuse a coverage profile cached by the gamma command");
  }

  // Flags the user typed must win over the config file, so reparse the file
  // first and then let CLI11 re-apply the command line.
  void load_config_file(const CLI::App& cmd) {
    if (config_path.empty()) return;
    const ExperimentConfig base = ExperimentConfig::from_json(slurp(config_path));
    // Copy file values only where the option was not given on the command line.
    if (!cmd.count("--grid-spacing")) config.topology.grid_spacing = base.topology.grid_spacing;
    if (!cmd.count("--macro-radius")) config.topology.macro_radius = base.topology.macro_radius;
    if (!cmd.count("--coverage-radius")) config.topology.coverage_radius = base.topology.coverage_radius;
    if (!cmd.count("--density")) config.topology.user_density = base.topology.user_density;
    if (!cmd.count("--files")) config.n_files = base.n_files;
    if (!cmd.count("--alpha")) config.alpha = base.alpha;
    if (!cmd.count("--cache")) config.cache_files = base.cache_files;
    if (!cmd.count("--strategies")) config.strategies = base.strategies;
    if (!cmd.count("--codings")) config.codings = base.codings;
    if (!cmd.count("--gamma-samples")) config.gamma_samples = base.gamma_samples;
    if (!cmd.count("--sim-samples")) config.sim_samples = base.sim_samples;
    if (!cmd.count("--fragments")) config.n_fragments = base.n_fragments;
    if (!cmd.count("--seed")) config.seed = base.seed;
    if (!cmd.count("--output")) config.output = base.output;
    if (!base.sweep_values.empty()) {
      config.sweep_axis = base.sweep_axis;
      config.sweep_values = base.sweep_values;
    }
  }

  CoverageProfile profile() const {
    if (!gamma_path.empty())
      return CoverageProfile::from_json(slurp(gamma_path));
    return estimate_gamma(config.topology, config.gamma_samples, config.seed);
  }
};

int run_rows(const ExperimentConfig& config, const std::string& gamma_path) {
  const std::vector<SweepRow> rows =
      gamma_path.empty()
          ? run_sweep(config)
          : run_sweep(config, CoverageProfile::from_json(slurp(gamma_path)));
  emit(to_csv(rows), config.output);
  const std::vector<std::string> violations = check_invariants(rows);
  for (const std::string& v : violations) std::cerr << "invariant violated: " << v << "\n";
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDS-coded edge caching: backhaul-rate analysis and simulation"};
  app.require_subcommand(1);

  CommonOptions gamma_opts, opt_opts, rate_opts, sweep_opts;

  CLI::App* gamma_cmd = app.add_subcommand(
      "gamma", "estimate the coverage-multiplicity profile of a deployment");
  gamma_opts.attach(*gamma_cmd);

  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "compute the backhaul-optimal placement for a scenario");
  opt_opts.attach(*optimize_cmd);

  CLI::App* rate_cmd = app.add_subcommand(
      "rate", "evaluate placement strategies at a single parameter point");
  rate_opts.attach(*rate_cmd);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "sweep one axis (M, r or N) and emit one CSV row per point");
  std::string axis = "M";
  double from = 5.0, to = 100.0, step = 5.0;
  std::vector<double> explicit_values;
  sweep_opts.attach(*sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "sweep axis: M, r or N");
  sweep_cmd->add_option("--from", from, "first sweep value");
  sweep_cmd->add_option("--to", to, "last sweep value (inclusive)");
  sweep_cmd->add_option("--step", step, "sweep increment");
  sweep_cmd->add_option("--values", explicit_values,
                        "explicit sweep values (overrides from/to/step)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gamma_cmd->parsed()) {
      gamma_opts.load_config_file(*gamma_cmd);
      emit(describe_gamma(gamma_opts.config) + "\n", gamma_opts.config.output);
      return 0;
    }

    if (optimize_cmd->parsed()) {
      opt_opts.load_config_file(*optimize_cmd);
      const ExperimentConfig& c = opt_opts.config;
      const CoverageProfile profile = opt_opts.profile();
      const PopularityModel popularity = PopularityModel::zipf(c.n_files, c.alpha);
      const Placement placement = optimize(profile, popularity, c.cache_files);
      const bool csv = c.output.size() > 4 &&
                       c.output.substr(c.output.size() - 4) == ".csv";
      emit(csv ? placement.to_csv() : placement.to_json() + "\n", c.output);
      return 0;
    }

    if (rate_cmd->parsed()) {
      rate_opts.load_config_file(*rate_cmd);
      ExperimentConfig c = rate_opts.config;
      c.sweep_axis = "M";
      c.sweep_values = {c.cache_files};
      return run_rows(c, rate_opts.gamma_path);
    }

    sweep_opts.load_config_file(*sweep_cmd);
    ExperimentConfig c = sweep_opts.config;
    if (sweep_cmd->count("--axis") || c.sweep_values.empty()) c.sweep_axis = axis;
    if (!explicit_values.empty()) {
      c.sweep_values = explicit_values;
    } else if (sweep_cmd->count("--from") || sweep_cmd->count("--to") ||
               sweep_cmd->count("--step") || c.sweep_values.empty()) {
      if (!(step > 0)) throw std::invalid_argument("sweep: step must be positive");
      c.sweep_values.clear();
      for (double v = from; v <= to + 1e-9; v += step) c.sweep_values.push_back(v);
    }
    return run_rows(c, sweep_opts.gamma_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
