#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace mdscache {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Square-grid SBS deployment around a macro cell.
//
// SBSs sit on a square lattice with spacing grid_spacing, shifted by half a
// cell in both axes so the MBS site (the macro-cell center) falls in the
// middle of a lattice cell and every location in the macro disk is within
// grid_spacing/sqrt(2) of some SBS. A lattice point is deployed when its
// distance to the center is at most
//
//   macro_radius + grid_spacing * (1 + 1/sqrt(2))
//
// i.e. every SBS whose coverage disk can reach a macro-cell user at any
// radius up to one full cell, plus one lattice ring of margin. With the
// default parameters (spacing 60 m, macro radius 500 m) this deploys
// exactly 316 SBSs.
struct GridTopology {
  double grid_spacing = 60.0;     // d: meters between adjacent SBSs
  double macro_radius = 500.0;    // D: macro-cell radius in meters
  double coverage_radius = 60.0;  // r: SBS coverage radius in meters
  double user_density = 0.05;     // users per square meter

  void validate() const;  // throws std::invalid_argument on bad dimensions
  double deployment_radius() const;
  // True when coverage_radius lies in [grid_spacing/sqrt(2), grid_spacing],
  // the band in which coverage disks overlap and no location is uncovered.
  bool full_coverage() const;
};

// Deployed SBS positions in deterministic row-major order.
std::vector<Vec2> deploy(const GridTopology& topology);

// Number of SBSs whose coverage disk (closed, radius coverage_radius)
// contains the point.
int coverage_count(const GridTopology& topology, const std::vector<Vec2>& sbs,
                   Vec2 point);

// Distribution of the number of SBSs covering a user placed uniformly at
// random in the macro disk. gamma[d] is the probability of being covered by
// exactly d SBSs, d = 0..s_max.
struct CoverageProfile {
  std::vector<double> gamma;
  std::vector<double> std_err;
  std::uint64_t samples = 0;  // 0 for profiles given analytically
  std::uint64_t seed = 0;

  int s_max() const { return static_cast<int>(gamma.size()) - 1; }
  double mean_multiplicity() const;
  void validate() const;

  // Profile from an explicit distribution, gamma[0] = probability of no
  // coverage. Normalization is checked, not rescaled.
  static CoverageProfile from_gamma(std::vector<double> gamma);

  std::string to_json() const;
  static CoverageProfile from_json(const std::string& text);
};

// A topology together with its (possibly hand-built) SBS positions.
struct Deployment {
  GridTopology topology;
  std::vector<Vec2> sbs;

  static Deployment make(const GridTopology& topology);
};

// Monte Carlo estimate of the coverage profile. Deterministic in
// (seed, samples) independent of the number of worker threads
// (threads == 0 picks a hardware-based default).
CoverageProfile estimate_gamma(const Deployment& deployment,
                               std::uint64_t samples, std::uint64_t seed,
                               int threads = 0);
CoverageProfile estimate_gamma(const GridTopology& topology,
                               std::uint64_t samples, std::uint64_t seed,
                               int threads = 0);

namespace detail {

// Uniform-grid bucket index over SBS positions for O(1) coverage counting.
class CoverageIndex {
 public:
  CoverageIndex(const std::vector<Vec2>& sbs, double radius);
  int count(Vec2 point) const;
  // Indices of all SBSs covering the point, ascending.
  void covering(Vec2 point, std::vector<int>& out) const;

 private:
  const std::vector<Vec2>& sbs_;
  double radius_ = 0.0;
  double cell_ = 1.0;
  std::unordered_map<std::int64_t, std::vector<int>> buckets_;
};

}  // namespace detail

}  // namespace mdscache
