#include "mdscache/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mdscache/rng.hpp"

namespace mdscache {

namespace {

double dist_sq(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

}  // namespace

void GridTopology::validate() const {
  const bool ok = grid_spacing > 0 && std::isfinite(grid_spacing) &&
                  macro_radius > 0 && std::isfinite(macro_radius) &&
                  coverage_radius >= 0 && std::isfinite(coverage_radius) &&
                  user_density > 0 && std::isfinite(user_density);
  if (!ok)
    throw std::invalid_argument(
        "topology: dimensions must be positive and finite");
}

double GridTopology::deployment_radius() const {
  return macro_radius + grid_spacing * (1.0 + std::numbers::sqrt2 / 2.0);
}

bool GridTopology::full_coverage() const {
  return coverage_radius >= grid_spacing / std::numbers::sqrt2 &&
         coverage_radius <= grid_spacing;
}

std::vector<Vec2> deploy(const GridTopology& topology) {
  topology.validate();
  const double d = topology.grid_spacing;
  const double cutoff_sq = topology.deployment_radius() * topology.deployment_radius();
  const int span = static_cast<int>(std::ceil(topology.deployment_radius() / d)) + 1;

  std::vector<Vec2> sbs;
  for (int j = -span; j <= span; ++j) {
    for (int i = -span; i <= span; ++i) {
      const Vec2 p{(i + 0.5) * d, (j + 0.5) * d};
      if (p.x * p.x + p.y * p.y <= cutoff_sq) sbs.push_back(p);
    }
  }
  return sbs;
}

int coverage_count(const GridTopology& topology, const std::vector<Vec2>& sbs,
                   Vec2 point) {
  const double r_sq = topology.coverage_radius * topology.coverage_radius;
  int count = 0;
  for (const Vec2& s : sbs)
    if (dist_sq(s, point) <= r_sq) ++count;
  return count;
}

double CoverageProfile::mean_multiplicity() const {
  double mean = 0;
  for (std::size_t d = 1; d < gamma.size(); ++d) mean += d * gamma[d];
  return mean;
}

void CoverageProfile::validate() const {
  if (gamma.empty())
    throw std::invalid_argument("coverage profile: gamma must be non-empty");
  double sum = 0;
  for (double g : gamma) {
    if (!(g >= 0) || !std::isfinite(g))
      throw std::invalid_argument("coverage profile: entries must be >= 0");
    sum += g;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("coverage profile: entries must sum to 1");
}

CoverageProfile CoverageProfile::from_gamma(std::vector<double> gamma) {
  CoverageProfile profile;
  profile.gamma = std::move(gamma);
  profile.std_err.assign(profile.gamma.size(), 0.0);
  profile.validate();
  return profile;
}

std::string CoverageProfile::to_json() const {
  nlohmann::json j;
  j["gamma"] = gamma;
  j["s_max"] = s_max();
  j["samples"] = samples;
  j["seed"] = seed;
  return j.dump(2);
}

CoverageProfile CoverageProfile::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  CoverageProfile profile;
  profile.gamma = j.at("gamma").get<std::vector<double>>();
  profile.samples = j.value("samples", std::uint64_t{0});
  profile.seed = j.value("seed", std::uint64_t{0});
  profile.std_err.resize(profile.gamma.size(), 0.0);
  if (profile.samples > 0)
    for (std::size_t d = 0; d < profile.gamma.size(); ++d)
      profile.std_err[d] = std::sqrt(profile.gamma[d] * (1.0 - profile.gamma[d]) /
                                     static_cast<double>(profile.samples));
  profile.validate();
  return profile;
}

Deployment Deployment::make(const GridTopology& topology) {
  return {topology, deploy(topology)};
}

namespace detail {

namespace {
std::int64_t bucket_key(std::int64_t ix, std::int64_t iy) {
  return (ix << 32) ^ (iy & 0xffffffffll);
}
}  // namespace

CoverageIndex::CoverageIndex(const std::vector<Vec2>& sbs, double radius)
    : sbs_(sbs), radius_(radius), cell_(radius > 0 ? radius : 1.0) {
  for (std::size_t i = 0; i < sbs_.size(); ++i) {
    const auto ix = static_cast<std::int64_t>(std::floor(sbs_[i].x / cell_));
    const auto iy = static_cast<std::int64_t>(std::floor(sbs_[i].y / cell_));
    buckets_[bucket_key(ix, iy)].push_back(static_cast<int>(i));
  }
}

int CoverageIndex::count(Vec2 point) const {
  if (radius_ <= 0) {
    int c = 0;
    for (const Vec2& s : sbs_)
      if (dist_sq(s, point) <= radius_ * radius_) ++c;
    return c;
  }
  const double r_sq = radius_ * radius_;
  const auto x_lo = static_cast<std::int64_t>(std::floor((point.x - radius_) / cell_));
  const auto x_hi = static_cast<std::int64_t>(std::floor((point.x + radius_) / cell_));
  const auto y_lo = static_cast<std::int64_t>(std::floor((point.y - radius_) / cell_));
  const auto y_hi = static_cast<std::int64_t>(std::floor((point.y + radius_) / cell_));
  int c = 0;
  for (std::int64_t iy = y_lo; iy <= y_hi; ++iy) {
    for (std::int64_t ix = x_lo; ix <= x_hi; ++ix) {
      const auto it = buckets_.find(bucket_key(ix, iy));
      if (it == buckets_.end()) continue;
      for (int id : it->second)
        if (dist_sq(sbs_[id], point) <= r_sq) ++c;
    }
  }
  return c;
}

void CoverageIndex::covering(Vec2 point, std::vector<int>& out) const {
  out.clear();
  const double r_sq = radius_ * radius_;
  for (std::size_t i = 0; i < sbs_.size(); ++i)
    if (dist_sq(sbs_[i], point) <= r_sq) out.push_back(static_cast<int>(i));
}

}  // namespace detail

CoverageProfile estimate_gamma(const Deployment& deployment,
                               std::uint64_t samples, std::uint64_t seed,
                               int threads) {
  deployment.topology.validate();
  if (samples < 1)
    throw std::invalid_argument("estimate_gamma: samples must be >= 1");

  const double macro_radius = deployment.topology.macro_radius;
  const detail::CoverageIndex index(deployment.sbs,
                                    deployment.topology.coverage_radius);
  const int max_mult = static_cast<int>(deployment.sbs.size());

  const int n_workers =
      std::max(1, std::min<int>(threads > 0 ? threads : default_threads(),
                                static_cast<int>(std::min<std::uint64_t>(samples, 64))));

  std::vector<std::vector<std::uint64_t>> counts(
      n_workers, std::vector<std::uint64_t>(max_mult + 1, 0));

  auto worker = [&](int w) {
    auto& local = counts[w];
    const std::uint64_t lo = samples * w / n_workers;
    const std::uint64_t hi = samples * (w + 1) / n_workers;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SubstreamRng rng(seed, i);
      const double rad = macro_radius * std::sqrt(rng.next_unit());
      const double ang = 2.0 * std::numbers::pi * rng.next_unit();
      const Vec2 p{rad * std::cos(ang), rad * std::sin(ang)};
      ++local[index.count(p)];
    }
  };

  if (n_workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  std::vector<std::uint64_t> total(max_mult + 1, 0);
  for (const auto& local : counts)
    for (int d = 0; d <= max_mult; ++d) total[d] += local[d];

  int s_max = 0;
  for (int d = 0; d <= max_mult; ++d)
    if (total[d] > 0) s_max = d;

  CoverageProfile profile;
  profile.samples = samples;
  profile.seed = seed;
  profile.gamma.resize(s_max + 1);
  profile.std_err.resize(s_max + 1);
  for (int d = 0; d <= s_max; ++d) {
    profile.gamma[d] = static_cast<double>(total[d]) / static_cast<double>(samples);
    profile.std_err[d] = std::sqrt(profile.gamma[d] * (1.0 - profile.gamma[d]) /
                                   static_cast<double>(samples));
  }
  return profile;
}

CoverageProfile estimate_gamma(const GridTopology& topology,
                               std::uint64_t samples, std::uint64_t seed,
                               int threads) {
  return estimate_gamma(Deployment::make(topology), samples, seed, threads);
}

}  // namespace mdscache
