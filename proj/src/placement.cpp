#include "mdscache/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace mdscache {

void Placement::validate() const {
  for (double v : q)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("placement: fractions must lie in [0,1]");
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  if (total > cache_capacity + 1e-9)
    throw std::invalid_argument("placement: cache budget exceeded");
}

std::string Placement::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["cache_capacity"] = cache_capacity;
  j["q"] = q;
  return j.dump(2);
}

Placement Placement::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Placement p;
  p.label = j.value("label", std::string{});
  p.cache_capacity = j.at("cache_capacity").get<double>();
  p.q = j.at("q").get<std::vector<double>>();
  p.validate();
  return p;
}

std::string Placement::to_csv() const {
  std::string out = "label,cache_capacity,file,q\n";
  char buf[64];
  for (std::size_t j = 0; j < q.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%zu,%.17g\n", label.c_str(),
                  cache_capacity, j, q[j]);
    out += buf;
  }
  return out;
}

namespace placements {

Placement most_popular(const PopularityModel& popularity, int cache_files) {
  const int n = popularity.n_files();
  if (cache_files < 0 || cache_files > n)
    throw std::invalid_argument("most_popular: need 0 <= M <= N");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return popularity.prob(a) > popularity.prob(b);
  });

  Placement p;
  p.q.assign(n, 0.0);
  p.cache_capacity = cache_files;
  p.label = "pop";
  for (int k = 0; k < cache_files; ++k) p.q[order[k]] = 1.0;
  return p;
}

Placement uniform(int n_files, double cache_files) {
  if (n_files < 1) throw std::invalid_argument("uniform: need at least one file");
  if (cache_files < 0 || cache_files > n_files)
    throw std::invalid_argument("uniform: need 0 <= M <= N");
  Placement p;
  p.q.assign(n_files, cache_files / n_files);
  p.cache_capacity = cache_files;
  p.label = "unif";
  return p;
}

Placement proportional(const PopularityModel& popularity, double cache_files) {
  const int n = popularity.n_files();
  if (cache_files < 0 || cache_files > n)
    throw std::invalid_argument("proportional: need 0 <= M <= N");

  Placement p;
  p.q.assign(n, 0.0);
  p.cache_capacity = cache_files;
  p.label = "prop";

  std::vector<bool> capped(n, false);
  int n_capped = 0;
  while (true) {
    const double budget = cache_files - n_capped;
    double mass = 0.0;
    for (int j = 0; j < n; ++j)
      if (!capped[j]) mass += popularity.prob(j);

    if (mass <= 0.0) {
      // Only zero-popularity files left; spread the rest evenly.
      const int open = n - n_capped;
      for (int j = 0; j < n; ++j)
        if (!capped[j]) p.q[j] = open > 0 ? budget / open : 0.0;
      break;
    }

    bool newly_capped = false;
    for (int j = 0; j < n; ++j) {
      if (capped[j]) continue;
      const double share = popularity.prob(j) * budget / mass;
      if (share >= 1.0) {
        p.q[j] = 1.0;
        capped[j] = true;
        ++n_capped;
        newly_capped = true;
      } else {
        p.q[j] = share;
      }
    }
    if (!newly_capped) break;
  }
  return p;
}

}  // namespace placements

std::vector<int> to_integer(const Placement& placement, int n_fragments) {
  if (n_fragments < 1)
    throw std::invalid_argument("to_integer: n_fragments must be >= 1");
  const int n_files = static_cast<int>(placement.q.size());
  const double scaled_total =
      std::accumulate(placement.q.begin(), placement.q.end(), 0.0) * n_fragments;
  const long long target = std::llround(scaled_total);

  std::vector<int> m(n_files);
  std::vector<std::pair<double, int>> remainders(n_files);
  long long assigned = 0;
  for (int j = 0; j < n_files; ++j) {
    const double exact = placement.q[j] * n_fragments;
    m[j] = static_cast<int>(std::floor(exact + 1e-12));
    m[j] = std::min(m[j], n_fragments);
    assigned += m[j];
    remainders[j] = {exact - m[j], j};
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; assigned < target && k < n_files; ++k) {
    const int j = remainders[k].second;
    if (m[j] < n_fragments) {
      ++m[j];
      ++assigned;
    }
  }
  for (int k = n_files - 1; assigned > target && k >= 0; --k) {
    const int j = remainders[k].second;
    if (m[j] > 0) {
      --m[j];
      --assigned;
    }
  }
  return m;
}

}  // namespace mdscache
