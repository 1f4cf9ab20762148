#pragma once

#include <vector>

#include "mdscache/placement.hpp"
#include "mdscache/popularity.hpp"
#include "mdscache/topology.hpp"

namespace mdscache {

// One linear piece of a file's backhaul-rate curve. Caching fraction q of
// file j lowers the expected rate at
//
//   slope(q) = p_j * sum_{d <= k} gamma_d * d   for q in (1/(k+1), 1/k],
//
// so each file contributes s_max segments with breakpoints at
// 1/s_max, ..., 1/2, 1 and slopes non-increasing in q (a convexity witness).
struct Segment {
  int file = 0;
  double q_low = 0.0;
  double q_high = 0.0;
  double slope = 0.0;  // rate decrease per unit of cached fraction, >= 0
};

// Segments for all files, ordered by (file, q_low).
std::vector<Segment> build_segments(const CoverageProfile& profile,
                                    const PopularityModel& popularity);

// Exact minimizer of the expected backhaul rate under MDS-coded caching,
// subject to sum(q) = cache_files and 0 <= q <= 1: fill the budget into
// segments by decreasing slope (ties: lower file, then lower q_low).
Placement optimize(const CoverageProfile& profile,
                   const PopularityModel& popularity, double cache_files);

// Exhaustive search over the discretized simplex
// {q : q_j in {0, delta, ..., 1}, sum(q) = cache_files},
// implemented as dynamic programming over the budget lattice; returns a best
// grid point. Guarded to small libraries.
Placement brute_force_oracle(const CoverageProfile& profile,
                             const PopularityModel& popularity,
                             double cache_files, double resolution);

// Largest per-file marginal rate decrease; the objective is Lipschitz in
// each coordinate with this constant.
double rate_lipschitz(const CoverageProfile& profile,
                      const PopularityModel& popularity);

}  // namespace mdscache
