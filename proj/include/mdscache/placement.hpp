#pragma once

#include <string>
#include <vector>

#include "mdscache/popularity.hpp"

namespace mdscache {

// Per-file cached fraction q[j] in [0,1]; every SBS stores the same
// placement. cache_capacity is the budget M in whole-file units.
struct Placement {
  std::vector<double> q;
  double cache_capacity = 0.0;
  std::string label;

  void validate() const;  // box and budget constraints
  std::string to_json() const;
  static Placement from_json(const std::string& text);
  std::string to_csv() const;  // one row per file: label,M,file,q
};

namespace placements {

// Cache the M most popular files whole (ties broken by lower index).
Placement most_popular(const PopularityModel& popularity, int cache_files);

// Cache the fraction M/N of every file.
Placement uniform(int n_files, double cache_files);

// Cache proportionally to popularity, capping files at a whole copy and
// redistributing the freed budget over the remaining files until no new
// file caps. Exhausts the budget exactly.
Placement proportional(const PopularityModel& popularity, double cache_files);

}  // namespace placements

// Integer packet counts m[j] at a concrete fragment count n, rounded by
// largest remainder so that sum(m) equals round(sum(q) * n) exactly.
std::vector<int> to_integer(const Placement& placement, int n_fragments);

}  // namespace mdscache
