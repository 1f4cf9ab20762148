#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdscache/rate.hpp"
#include "mdscache/topology.hpp"

namespace mdscache {

// Parameters of one figure-style run: a sweep over exactly one axis
// (cache size M, coverage radius r, or library size N), evaluated for a set
// of placement strategies under both coding schemes.
struct ExperimentConfig {
  GridTopology topology;
  int n_files = 200;
  double alpha = 0.7;
  double cache_files = 20.0;

  std::string sweep_axis = "M";       // "M" | "r" | "N"
  std::vector<double> sweep_values;   // empty means the single configured point

  std::vector<std::string> strategies{"opt", "pop", "unif", "prop"};
  std::vector<std::string> codings{"mds", "uncoded"};

  std::uint64_t gamma_samples = 1'000'000;
  std::uint64_t sim_samples = 0;  // 0 = analytic rates only
  int n_fragments = 100;
  std::uint64_t seed = 1;
  std::string output;  // CSV path; empty writes to stdout

  void validate() const;
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct SweepRow {
  std::string sweep_param;
  double value = 0.0;
  std::string strategy;
  std::string coding;
  double rate = 0.0;
  double std_err = 0.0;
  std::uint64_t samples = 0;  // 0 for analytic rows
  std::uint64_t seed = 0;
};

// One analytic row per (sweep value, strategy, coding), plus one simulated
// row per combination when sim_samples > 0. The coverage profile is
// estimated once per distinct topology point. Rows come back sorted.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

// Same, reusing a cached profile for the fixed topology instead of
// re-estimating it. Rejected for radius sweeps, which need one profile per
// sweep point.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const CoverageProfile& profile);

std::string to_csv(const std::vector<SweepRow>& rows);

// Harness-level invariants: the optimal MDS rate never exceeds a heuristic's,
// and MDS never exceeds uncoded for the same strategy (analytic rows).
// Returns human-readable violation messages, empty when everything holds.
std::vector<std::string> check_invariants(const std::vector<SweepRow>& rows);

// Runs only the topology estimation; returns profile plus deployment count
// as a JSON document (byte-identical across runs with the same seed).
std::string describe_gamma(const ExperimentConfig& config);

}  // namespace mdscache
