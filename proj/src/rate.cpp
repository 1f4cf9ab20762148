#include "mdscache/rate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mdscache/rng.hpp"
#include "mdscache/rs_code.hpp"

namespace mdscache {

namespace {

void check_dimensions(const CoverageProfile& profile,
                      const PopularityModel& popularity,
                      const Placement& placement) {
  profile.validate();
  if (static_cast<int>(placement.q.size()) != popularity.n_files())
    throw std::invalid_argument(
        "rate: placement and popularity dimensions differ");
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Draws exactly m distinct values in [0, n) into the bit mask (Floyd's
// sampling). mask must be zeroed and hold at least n bits.
void sample_subset(SubstreamRng& rng, int n, int m,
                   std::vector<std::uint64_t>& mask) {
  for (int t = n - m; t < n; ++t) {
    const int v = static_cast<int>(rng.next_below(t + 1));
    const int pick = (mask[v >> 6] >> (v & 63)) & 1 ? t : v;
    mask[pick >> 6] |= std::uint64_t{1} << (pick & 63);
  }
}

struct SimTotals {
  std::uint64_t missing = 0;     // backhaul fragments over all requests
  std::uint64_t missing_sq = 0;  // sum of squared per-request fragments
};

RateReport report_from_totals(const SimTotals& totals, std::uint64_t samples,
                              int n_fragments, RateMode mode) {
  const double n = n_fragments;
  const double mean = static_cast<double>(totals.missing) / (samples * n);
  const double mean_sq =
      static_cast<double>(totals.missing_sq) / (samples * n * n);
  const double variance = std::max(0.0, mean_sq - mean * mean);
  RateReport report;
  report.rate = mean;
  report.mode = mode;
  report.samples = samples;
  report.std_err = std::sqrt(variance / static_cast<double>(samples));
  return report;
}

// Common counting-mode loop; draw_multiplicity maps a per-request RNG to the
// number of covering SBSs.
template <class DrawMultiplicity>
RateReport run_counting(const PopularityModel& popularity,
                        const std::vector<int>& packet_counts,
                        CodingScheme scheme, int n_fragments,
                        std::uint64_t samples, std::uint64_t seed, int threads,
                        DrawMultiplicity draw_multiplicity) {
  if (n_fragments < 1)
    throw std::invalid_argument("simulate: n_fragments must be >= 1");
  if (samples < 1) throw std::invalid_argument("simulate: samples must be >= 1");

  const int n_workers =
      std::max(1, std::min<int>(threads > 0 ? threads : default_threads(),
                                static_cast<int>(std::min<std::uint64_t>(samples, 64))));
  std::vector<SimTotals> totals(n_workers);
  const int mask_words = (n_fragments + 63) / 64;

  auto worker = [&](int w) {
    SimTotals local;
    std::vector<std::uint64_t> cache_mask(mask_words), held_mask(mask_words);
    const std::uint64_t lo = samples * w / n_workers;
    const std::uint64_t hi = samples * (w + 1) / n_workers;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SubstreamRng rng(seed, i);
      const int d = draw_multiplicity(rng);
      const int file = popularity.sample(rng);
      const int m = packet_counts[file];

      std::uint64_t missing = 0;
      if (d == 0) {
        missing = n_fragments;  // nothing reachable, full file over backhaul
      } else if (scheme == CodingScheme::mds) {
        const long long gathered = static_cast<long long>(d) * m;
        missing = gathered >= n_fragments
                      ? 0
                      : static_cast<std::uint64_t>(n_fragments - gathered);
      } else if (m >= n_fragments) {
        missing = 0;
      } else if (m == 0) {
        missing = n_fragments;
      } else {
        // Each SBS holds its own uniform m-subset; the user sees the union.
        std::fill(held_mask.begin(), held_mask.end(), 0);
        for (int s = 0; s < d; ++s) {
          std::fill(cache_mask.begin(), cache_mask.end(), 0);
          sample_subset(rng, n_fragments, m, cache_mask);
          for (int word = 0; word < mask_words; ++word)
            held_mask[word] |= cache_mask[word];
        }
        int held = 0;
        for (std::uint64_t word : held_mask) held += std::popcount(word);
        missing = n_fragments - held;
      }
      local.missing += missing;
      local.missing_sq += missing * missing;
    }
    totals[w] = local;
  };

  if (n_workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  SimTotals sum;
  for (const SimTotals& t : totals) {
    sum.missing += t.missing;
    sum.missing_sq += t.missing_sq;
  }
  return report_from_totals(sum, samples, n_fragments,
                            RateMode::simulated_counting);
}

}  // namespace

CodingScheme parse_coding_scheme(const std::string& tag) {
  if (tag == "mds") return CodingScheme::mds;
  if (tag == "uncoded") return CodingScheme::uncoded;
  throw std::invalid_argument("unknown coding scheme tag: " + tag);
}

std::string to_string(CodingScheme scheme) {
  return scheme == CodingScheme::mds ? "mds" : "uncoded";
}

RateReport rate_mds(const CoverageProfile& profile,
                    const PopularityModel& popularity,
                    const Placement& placement) {
  check_dimensions(profile, popularity, placement);
  double rate = profile.gamma[0];
  for (int d = 1; d <= profile.s_max(); ++d) {
    const double g = profile.gamma[d];
    if (g == 0.0) continue;
    double inner = 0.0;
    for (int j = 0; j < popularity.n_files(); ++j)
      inner += popularity.prob(j) * (1.0 - std::min(1.0, d * placement.q[j]));
    rate += g * inner;
  }
  return {rate, RateMode::analytic, 0, 0.0};
}

RateReport rate_uncoded(const CoverageProfile& profile,
                        const PopularityModel& popularity,
                        const Placement& placement) {
  check_dimensions(profile, popularity, placement);
  double rate = profile.gamma[0];
  for (int d = 1; d <= profile.s_max(); ++d) {
    const double g = profile.gamma[d];
    if (g == 0.0) continue;
    double inner = 0.0;
    for (int j = 0; j < popularity.n_files(); ++j)
      inner += popularity.prob(j) * std::pow(1.0 - placement.q[j], d);
    rate += g * inner;
  }
  return {rate, RateMode::analytic, 0, 0.0};
}

RateReport simulate_counting(const CoverageProfile& profile,
                             const PopularityModel& popularity,
                             const Placement& placement, CodingScheme scheme,
                             int n_fragments, std::uint64_t samples,
                             std::uint64_t seed, int threads) {
  check_dimensions(profile, popularity, placement);
  const std::vector<int> packet_counts = to_integer(placement, n_fragments);

  std::vector<double> cdf(profile.gamma.size());
  double acc = 0.0;
  for (std::size_t d = 0; d < profile.gamma.size(); ++d) {
    acc += profile.gamma[d];
    cdf[d] = acc;
  }
  cdf.back() = 1.0;

  return run_counting(popularity, packet_counts, scheme, n_fragments, samples,
                      seed, threads, [&cdf](SubstreamRng& rng) {
                        const double u = rng.next_unit();
                        const auto it =
                            std::upper_bound(cdf.begin(), cdf.end(), u);
                        return static_cast<int>(
                            std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                     cdf.size() - 1));
                      });
}

RateReport simulate_counting(const Deployment& deployment,
                             const PopularityModel& popularity,
                             const Placement& placement, CodingScheme scheme,
                             int n_fragments, std::uint64_t samples,
                             std::uint64_t seed, int threads) {
  deployment.topology.validate();
  if (static_cast<int>(placement.q.size()) != popularity.n_files())
    throw std::invalid_argument(
        "rate: placement and popularity dimensions differ");
  const std::vector<int> packet_counts = to_integer(placement, n_fragments);
  const detail::CoverageIndex index(deployment.sbs,
                                    deployment.topology.coverage_radius);
  const double macro_radius = deployment.topology.macro_radius;

  return run_counting(popularity, packet_counts, scheme, n_fragments, samples,
                      seed, threads, [&](SubstreamRng& rng) {
                        const double rad = macro_radius * std::sqrt(rng.next_unit());
                        const double ang = 2.0 * std::numbers::pi * rng.next_unit();
                        return index.count({rad * std::cos(ang), rad * std::sin(ang)});
                      });
}

CodedSimReport simulate_coded_end_to_end(const Deployment& deployment,
                                         const PopularityModel& popularity,
                                         const Placement& placement,
                                         int n_fragments,
                                         std::uint64_t samples,
                                         std::uint64_t seed) {
  deployment.topology.validate();
  if (static_cast<int>(placement.q.size()) != popularity.n_files())
    throw std::invalid_argument(
        "rate: placement and popularity dimensions differ");
  if (n_fragments < 1)
    throw std::invalid_argument("simulate: n_fragments must be >= 1");
  if (samples < 1) throw std::invalid_argument("simulate: samples must be >= 1");

  const int n_sbs = static_cast<int>(deployment.sbs.size());
  const int n_files = popularity.n_files();
  const std::vector<int> packet_counts = to_integer(placement, n_fragments);

  // Placement phase: encode every file and hand out disjoint packet blocks.
  // The MBS keeps packets [0, n - m_j); SBS s stores the m_j packets starting
  // at n - m_j + s * m_j.
  constexpr std::size_t kFragmentBytes = 16;
  std::vector<std::vector<Payload>> originals(n_files);
  std::vector<std::vector<Packet>> encoded(n_files);
  for (int j = 0; j < n_files; ++j) {
    const int m = packet_counts[j];
    const int total_packets = n_fragments + (n_sbs - 1) * m;
    CodeParams params{n_fragments, total_packets};
    params.validate();  // rejects files beyond the 256-packet field capacity

    SubstreamRng rng(seed ^ 0x66696c65ull, j);
    std::vector<Payload> fragments(n_fragments);
    for (Payload& f : fragments) {
      f.resize(kFragmentBytes);
      for (auto& byte : f) byte = static_cast<std::uint8_t>(rng.next_below(256));
    }
    encoded[j] = encode(params, fragments);
    originals[j] = std::move(fragments);
  }

  const detail::CoverageIndex index(deployment.sbs,
                                    deployment.topology.coverage_radius);
  const double macro_radius = deployment.topology.macro_radius;

  SimTotals totals;
  bool all_decoded = true;
  std::vector<int> covering;
  std::vector<Packet> collected;
  for (std::uint64_t i = 0; i < samples; ++i) {
    SubstreamRng rng(seed, i);
    const double rad = macro_radius * std::sqrt(rng.next_unit());
    const double ang = 2.0 * std::numbers::pi * rng.next_unit();
    index.covering({rad * std::cos(ang), rad * std::sin(ang)}, covering);
    const int file = popularity.sample(rng);
    const int m = packet_counts[file];
    const int d = static_cast<int>(covering.size());

    collected.clear();
    std::uint64_t backhaul = 0;
    if (d == 0) {
      // Out of SBS reach; the MBS serves the whole file.
      backhaul = n_fragments;
      for (int k = 0; k < n_fragments; ++k) collected.push_back(encoded[file][k]);
    } else {
      for (int s : covering) {
        const int start = n_fragments - m + s * m;
        for (int k = 0; k < m; ++k)
          collected.push_back(encoded[file][start + k]);
      }
      const long long gathered = static_cast<long long>(d) * m;
      if (gathered < n_fragments) {
        backhaul = static_cast<std::uint64_t>(n_fragments - gathered);
        for (std::uint64_t k = 0; k < backhaul; ++k)
          collected.push_back(encoded[file][k]);  // MBS's reserved block
      } else {
        collected.resize(n_fragments);
      }
    }

    const CodeParams params{
        n_fragments, n_fragments + (n_sbs - 1) * m};
    const std::vector<Payload> recovered = decode(params, collected);
    if (recovered != originals[file]) all_decoded = false;

    totals.missing += backhaul;
    totals.missing_sq += backhaul * backhaul;
  }

  CodedSimReport result;
  result.report = report_from_totals(totals, samples, n_fragments,
                                     RateMode::simulated_coded);
  result.all_decoded = all_decoded;
  return result;
}

}  // namespace mdscache
