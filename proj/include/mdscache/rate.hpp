#pragma once

#include <cstdint>
#include <string>

#include "mdscache/placement.hpp"
#include "mdscache/popularity.hpp"
#include "mdscache/topology.hpp"

namespace mdscache {

enum class CodingScheme { mds, uncoded };
enum class RateMode { analytic, simulated_counting, simulated_coded };

CodingScheme parse_coding_scheme(const std::string& tag);  // "mds" | "uncoded"
std::string to_string(CodingScheme scheme);

// Expected fraction of a requested file's bits served over the MBS backhaul.
struct RateReport {
  double rate = 0.0;
  RateMode mode = RateMode::analytic;
  std::uint64_t samples = 0;  // 0 in analytic mode
  double std_err = 0.0;       // 0 in analytic mode
};

// Average backhaul rate when every SBS stores distinct MDS-coded packets:
// users covered by d SBSs gather d*q_j of file j before touching the MBS.
RateReport rate_mds(const CoverageProfile& profile,
                    const PopularityModel& popularity,
                    const Placement& placement);

// Average backhaul rate when SBSs store random uncoded fragments, which may
// repeat across caches.
RateReport rate_uncoded(const CoverageProfile& profile,
                        const PopularityModel& popularity,
                        const Placement& placement);

// Monte Carlo delivery simulation that tracks packet counts only (the MDS
// property makes packet identity irrelevant). Placements are realized with
// integer per-file packet counts m_j at the given fragment count.
// Deterministic in (seed, samples) independent of thread count.
RateReport simulate_counting(const CoverageProfile& profile,
                             const PopularityModel& popularity,
                             const Placement& placement, CodingScheme scheme,
                             int n_fragments, std::uint64_t samples,
                             std::uint64_t seed, int threads = 0);

// Same, drawing user locations uniformly in the macro disk of a concrete
// deployment instead of sampling a precomputed profile.
RateReport simulate_counting(const Deployment& deployment,
                             const PopularityModel& popularity,
                             const Placement& placement, CodingScheme scheme,
                             int n_fragments, std::uint64_t samples,
                             std::uint64_t seed, int threads = 0);

struct CodedSimReport {
  RateReport report;
  bool all_decoded = false;
};

// Full-fidelity MDS delivery on real bytes: files are split, Reed-Solomon
// encoded, and spread over the caches; every simulated request gathers
// packets, decodes, and verifies the reconstruction. Request streams match
// the deployment-mode counting simulator for the same seed, so the two rates
// must agree exactly.
CodedSimReport simulate_coded_end_to_end(const Deployment& deployment,
                                         const PopularityModel& popularity,
                                         const Placement& placement,
                                         int n_fragments,
                                         std::uint64_t samples,
                                         std::uint64_t seed);

}  // namespace mdscache
