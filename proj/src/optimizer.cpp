#include "mdscache/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdscache {

namespace {

// Cumulative weights w[k] = sum_{d=1..k} gamma_d * d for k = 0..s_max.
std::vector<double> cumulative_weights(const CoverageProfile& profile) {
  const int s_max = profile.s_max();
  std::vector<double> w(s_max + 1, 0.0);
  for (int d = 1; d <= s_max; ++d) w[d] = w[d - 1] + profile.gamma[d] * d;
  return w;
}

// Expected backhaul rate of caching fraction q of a file with popularity p.
double file_rate(const CoverageProfile& profile, double p, double q) {
  double rate = profile.gamma[0] * p;
  for (int d = 1; d <= profile.s_max(); ++d)
    rate += profile.gamma[d] * p * (1.0 - std::min(1.0, d * q));
  return rate;
}

}  // namespace

std::vector<Segment> build_segments(const CoverageProfile& profile,
                                    const PopularityModel& popularity) {
  profile.validate();
  const int s_max = profile.s_max();
  const std::vector<double> w = cumulative_weights(profile);

  std::vector<Segment> segments;
  segments.reserve(popularity.n_files() * std::max(s_max, 1));
  for (int j = 0; j < popularity.n_files(); ++j) {
    const double p = popularity.prob(j);
    if (s_max == 0) {
      // No SBS can ever cover a user; caching changes nothing.
      segments.push_back({j, 0.0, 1.0, 0.0});
      continue;
    }
    double low = 0.0;
    for (int k = s_max; k >= 1; --k) {
      const double high = 1.0 / k;
      segments.push_back({j, low, high, p * w[k]});
      low = high;
    }
  }
  return segments;
}

double rate_lipschitz(const CoverageProfile& profile,
                      const PopularityModel& popularity) {
  const std::vector<double> w = cumulative_weights(profile);
  double max_p = 0.0;
  for (int j = 0; j < popularity.n_files(); ++j)
    max_p = std::max(max_p, popularity.prob(j));
  return max_p * w.back();
}

Placement optimize(const CoverageProfile& profile,
                   const PopularityModel& popularity, double cache_files) {
  const int n_files = popularity.n_files();
  if (cache_files < 0)
    throw std::invalid_argument("optimize: cache budget must be >= 0");
  if (cache_files > n_files)
    throw std::invalid_argument("optimize: cache budget exceeds library size");

  std::vector<Segment> segments = build_segments(profile, popularity);
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& a, const Segment& b) {
                     if (a.slope != b.slope) return a.slope > b.slope;
                     if (a.file != b.file) return a.file < b.file;
                     return a.q_low < b.q_low;
                   });

  Placement placement;
  placement.q.assign(n_files, 0.0);
  placement.cache_capacity = cache_files;
  placement.label = "opt";

  double remaining = cache_files;
  for (const Segment& s : segments) {
    if (remaining <= 0.0) break;
    const double take = std::min(s.q_high - s.q_low, remaining);
    placement.q[s.file] += take;
    remaining -= take;
  }
  // Clamp accumulated fill against rounding drift.
  for (double& v : placement.q) v = std::clamp(v, 0.0, 1.0);
  return placement;
}

Placement brute_force_oracle(const CoverageProfile& profile,
                             const PopularityModel& popularity,
                             double cache_files, double resolution) {
  const int n_files = popularity.n_files();
  if (n_files > 4)
    throw std::invalid_argument("brute_force_oracle: guarded to N <= 4");
  if (!(resolution > 0.0 && resolution <= 1.0))
    throw std::invalid_argument("brute_force_oracle: bad resolution");
  profile.validate();

  const int levels = static_cast<int>(std::llround(1.0 / resolution));
  if (std::abs(levels * resolution - 1.0) > 1e-9)
    throw std::invalid_argument("brute_force_oracle: resolution must divide 1");
  const int budget = static_cast<int>(std::llround(cache_files / resolution));
  if (std::abs(budget * resolution - cache_files) > 1e-9)
    throw std::invalid_argument(
        "brute_force_oracle: resolution must divide the budget");
  if (budget < 0 || budget > n_files * levels)
    throw std::invalid_argument("brute_force_oracle: infeasible budget");

  constexpr double kInf = std::numeric_limits<double>::infinity();

  // best[j][b]: minimal rate over files 0..j-1 spending exactly b grid units.
  std::vector<std::vector<double>> best(
      n_files + 1, std::vector<double>(budget + 1, kInf));
  std::vector<std::vector<int>> choice(
      n_files + 1, std::vector<int>(budget + 1, 0));
  best[0][0] = 0.0;

  for (int j = 0; j < n_files; ++j) {
    const double p = popularity.prob(j);
    std::vector<double> cost(levels + 1);
    for (int k = 0; k <= levels; ++k)
      cost[k] = file_rate(profile, p, k * resolution);
    for (int b = 0; b <= budget; ++b) {
      if (best[j][b] == kInf) continue;
      for (int k = 0; k <= levels && b + k <= budget; ++k) {
        const double value = best[j][b] + cost[k];
        if (value < best[j + 1][b + k]) {
          best[j + 1][b + k] = value;
          choice[j + 1][b + k] = k;
        }
      }
    }
  }
  if (best[n_files][budget] == kInf)
    throw std::invalid_argument("brute_force_oracle: infeasible budget");

  Placement placement;
  placement.q.assign(n_files, 0.0);
  placement.cache_capacity = cache_files;
  placement.label = "oracle";
  int b = budget;
  for (int j = n_files; j >= 1; --j) {
    const int k = choice[j][b];
    placement.q[j - 1] = k * resolution;
    b -= k;
  }
  return placement;
}

}  // namespace mdscache
