#include "mdscache/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "mdscache/optimizer.hpp"
#include "mdscache/rng.hpp"

namespace mdscache {

namespace {

const std::vector<std::string> kStrategyOrder{"opt", "pop", "unif", "prop"};

int strategy_rank(const std::string& s) {
  const auto it = std::find(kStrategyOrder.begin(), kStrategyOrder.end(), s);
  return static_cast<int>(it - kStrategyOrder.begin());
}

int coding_rank(const std::string& c) { return c == "mds" ? 0 : 1; }

Placement make_placement(const std::string& strategy,
                         const CoverageProfile& profile,
                         const PopularityModel& popularity, double cache_files) {
  if (strategy == "opt") return optimize(profile, popularity, cache_files);
  if (strategy == "pop") {
    const auto m = static_cast<int>(std::llround(cache_files));
    if (std::abs(cache_files - m) > 1e-9)
      throw std::invalid_argument(
          "most-popular placement needs an integer cache size");
    return placements::most_popular(popularity, m);
  }
  if (strategy == "unif")
    return placements::uniform(popularity.n_files(), cache_files);
  if (strategy == "prop")
    return placements::proportional(popularity, cache_files);
  throw std::invalid_argument("unknown strategy: " + strategy);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  topology.validate();
  if (n_files < 1) throw std::invalid_argument("config: n_files must be >= 1");
  if (!(alpha >= 0)) throw std::invalid_argument("config: alpha must be >= 0");
  if (sweep_axis != "M" && sweep_axis != "r" && sweep_axis != "N")
    throw std::invalid_argument("config: sweep axis must be M, r or N");
  if (gamma_samples < 1)
    throw std::invalid_argument("config: gamma_samples must be >= 1");
  if (n_fragments < 1)
    throw std::invalid_argument("config: n_fragments must be >= 1");
  for (const std::string& s : strategies)
    if (strategy_rank(s) >= static_cast<int>(kStrategyOrder.size()))
      throw std::invalid_argument("config: unknown strategy " + s);
  for (const std::string& c : codings) parse_coding_scheme(c);
  for (double v : sweep_values)
    if (!(v > 0) || !std::isfinite(v))
      throw std::invalid_argument("config: sweep values must be positive");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  if (j.contains("topology")) {
    const auto& t = j.at("topology");
    c.topology.grid_spacing = t.value("grid_spacing", c.topology.grid_spacing);
    c.topology.macro_radius = t.value("macro_radius", c.topology.macro_radius);
    c.topology.coverage_radius =
        t.value("coverage_radius", c.topology.coverage_radius);
    c.topology.user_density = t.value("user_density", c.topology.user_density);
  }
  c.n_files = j.value("n_files", c.n_files);
  c.alpha = j.value("alpha", c.alpha);
  c.cache_files = j.value("cache_files", c.cache_files);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    c.sweep_axis = s.value("axis", c.sweep_axis);
    c.sweep_values = s.value("values", c.sweep_values);
  }
  c.strategies = j.value("strategies", c.strategies);
  c.codings = j.value("codings", c.codings);
  c.gamma_samples = j.value("gamma_samples", c.gamma_samples);
  c.sim_samples = j.value("sim_samples", c.sim_samples);
  c.n_fragments = j.value("n_fragments", c.n_fragments);
  c.seed = j.value("seed", c.seed);
  c.output = j.value("output", c.output);
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["topology"] = {{"grid_spacing", topology.grid_spacing},
                   {"macro_radius", topology.macro_radius},
                   {"coverage_radius", topology.coverage_radius},
                   {"user_density", topology.user_density}};
  j["n_files"] = n_files;
  j["alpha"] = alpha;
  j["cache_files"] = cache_files;
  j["sweep"] = {{"axis", sweep_axis}, {"values", sweep_values}};
  j["strategies"] = strategies;
  j["codings"] = codings;
  j["gamma_samples"] = gamma_samples;
  j["sim_samples"] = sim_samples;
  j["n_fragments"] = n_fragments;
  j["seed"] = seed;
  j["output"] = output;
  return j.dump(2);
}

namespace {

std::vector<SweepRow> run_sweep_impl(const ExperimentConfig& config,
                                     const CoverageProfile* fixed_profile) {
  config.validate();
  if (fixed_profile != nullptr) {
    fixed_profile->validate();
    if (config.sweep_axis == "r")
      throw std::invalid_argument(
          "run_sweep: a radius sweep cannot reuse a single cached profile");
  }

  std::vector<double> values = config.sweep_values;
  if (values.empty()) {
    if (config.sweep_axis == "M") values.push_back(config.cache_files);
    else if (config.sweep_axis == "r") values.push_back(config.topology.coverage_radius);
    else values.push_back(config.n_files);
  }

  // Coverage profiles per distinct radius; M and N sweeps share one.
  std::map<double, CoverageProfile> profiles;
  auto profile_for = [&](double radius) -> const CoverageProfile& {
    if (fixed_profile != nullptr) return *fixed_profile;
    auto it = profiles.find(radius);
    if (it == profiles.end()) {
      GridTopology t = config.topology;
      t.coverage_radius = radius;
      it = profiles.emplace(radius, estimate_gamma(t, config.gamma_samples,
                                                   config.seed)).first;
    }
    return it->second;
  };

  std::vector<SweepRow> rows;
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    const double value = values[vi];
    const double radius = config.sweep_axis == "r" ? value
                                                   : config.topology.coverage_radius;
    const int n_files = config.sweep_axis == "N"
                            ? static_cast<int>(std::llround(value))
                            : config.n_files;
    const double cache_files =
        config.sweep_axis == "M" ? value : config.cache_files;

    const CoverageProfile& profile = profile_for(radius);
    const PopularityModel popularity =
        PopularityModel::zipf(n_files, config.alpha);

    for (const std::string& strategy : config.strategies) {
      const Placement placement =
          make_placement(strategy, profile, popularity, cache_files);
      for (const std::string& coding : config.codings) {
        const CodingScheme scheme = parse_coding_scheme(coding);
        const RateReport analytic =
            scheme == CodingScheme::mds
                ? rate_mds(profile, popularity, placement)
                : rate_uncoded(profile, popularity, placement);
        rows.push_back({config.sweep_axis, value, strategy, coding,
                        analytic.rate, 0.0, 0, profile.seed});

        if (config.sim_samples > 0) {
          const std::uint64_t row_seed =
              SubstreamRng(config.seed,
                           (vi << 16) ^ (strategy_rank(strategy) << 4) ^
                               coding_rank(coding))
                  .next_u64();
          const RateReport sim = simulate_counting(
              profile, popularity, placement, scheme, config.n_fragments,
              config.sim_samples, row_seed);
          rows.push_back({config.sweep_axis, value, strategy, coding, sim.rate,
                          sim.std_err, sim.samples, row_seed});
        }
      }
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.value != b.value) return a.value < b.value;
                     if (strategy_rank(a.strategy) != strategy_rank(b.strategy))
                       return strategy_rank(a.strategy) < strategy_rank(b.strategy);
                     if (coding_rank(a.coding) != coding_rank(b.coding))
                       return coding_rank(a.coding) < coding_rank(b.coding);
                     return a.samples < b.samples;
                   });
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  return run_sweep_impl(config, nullptr);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const CoverageProfile& profile) {
  return run_sweep_impl(config, &profile);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "sweep_param,value,strategy,coding,rate,stderr,samples,seed\n";
  for (const SweepRow& r : rows) {
    out += r.sweep_param;
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += r.strategy;
    out += ',';
    out += r.coding;
    out += ',';
    out += format_double(r.rate);
    out += ',';
    out += format_double(r.std_err);
    out += ',';
    out += std::to_string(r.samples);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::vector<std::string> check_invariants(const std::vector<SweepRow>& rows) {
  std::vector<std::string> violations;

  // Index analytic rows by (value, strategy, coding).
  std::map<std::tuple<double, std::string, std::string>, double> analytic;
  for (const SweepRow& r : rows)
    if (r.samples == 0) analytic[{r.value, r.strategy, r.coding}] = r.rate;

  for (const auto& [key, rate] : analytic) {
    const auto& [value, strategy, coding] = key;
    if (coding == "mds" && strategy != "opt") {
      const auto opt = analytic.find({value, "opt", "mds"});
      if (opt != analytic.end() && opt->second > rate + 1e-9)
        violations.push_back("opt-mds rate exceeds " + strategy + "-mds at value " +
                             format_double(value));
    }
    if (coding == "mds") {
      const auto unc = analytic.find({value, strategy, "uncoded"});
      if (unc != analytic.end() && rate > unc->second + 1e-12)
        violations.push_back(strategy + "-mds rate exceeds " + strategy +
                             "-uncoded at value " + format_double(value));
    }
  }
  return violations;
}

std::string describe_gamma(const ExperimentConfig& config) {
  config.validate();
  const Deployment deployment = Deployment::make(config.topology);
  const CoverageProfile profile =
      estimate_gamma(deployment, config.gamma_samples, config.seed);

  nlohmann::json j;
  j["sbs_count"] = deployment.sbs.size();
  j["full_coverage"] = config.topology.full_coverage();
  j["gamma"] = profile.gamma;
  j["s_max"] = profile.s_max();
  j["samples"] = profile.samples;
  j["seed"] = profile.seed;
  j["mean_multiplicity"] = profile.mean_multiplicity();
  return j.dump(2);
}

}  // namespace mdscache
