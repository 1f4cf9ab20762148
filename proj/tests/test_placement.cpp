#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <vector>

#include "mdscache/placement.hpp"
#include "mdscache/rng.hpp"

using namespace mdscache;

namespace {

double total(const Placement& p) {
  return std::accumulate(p.q.begin(), p.q.end(), 0.0);
}

}  // namespace

TEST_SUITE_BEGIN("placement");

TEST_CASE("most popular stores whole top files") {
  const auto zipf = PopularityModel::zipf(3, 1.0);  // 6/11, 3/11, 2/11
  const auto one = placements::most_popular(zipf, 1);
  CHECK(one.q == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(one.label == "pop");

  const auto all = placements::most_popular(zipf, 3);
  CHECK(all.q == std::vector<double>{1.0, 1.0, 1.0});

  const auto dense = placements::most_popular(PopularityModel::zipf(200, 0.7), 20);
  double sum = 0.0;
  for (int j = 0; j < 200; ++j) {
    sum += dense.q[j];
    CHECK(dense.q[j] == (j < 20 ? 1.0 : 0.0));  // ties break to lower index
  }
  CHECK(sum == 20.0);
}

TEST_CASE("most popular breaks ties toward the lower index") {
  const auto uniform = PopularityModel::zipf(5, 0.0);
  const auto pick = placements::most_popular(uniform, 2);
  CHECK(pick.q == std::vector<double>{1.0, 1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("most popular rejects overfull caches") {
  const auto zipf = PopularityModel::zipf(4, 1.0);
  CHECK_THROWS_AS(placements::most_popular(zipf, 5), std::invalid_argument);
  CHECK_THROWS_AS(placements::most_popular(zipf, -1), std::invalid_argument);
}

TEST_CASE("uniform splits the budget evenly") {
  const auto p = placements::uniform(4, 2.0);
  CHECK(p.q == std::vector<double>{0.5, 0.5, 0.5, 0.5});
  CHECK(placements::uniform(3, 3.0).q == std::vector<double>{1.0, 1.0, 1.0});

  const auto dense = placements::uniform(200, 20.0);
  for (double v : dense.q) CHECK(v == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(total(dense) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("proportional matches hand-executed redistribution") {
  SUBCASE("no file caps") {
    const auto model = PopularityModel::from_probs({0.9, 0.1});
    const auto p = placements::proportional(model, 1.0);
    CHECK(p.q[0] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(p.q[1] == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("one file caps and the rest is redistributed") {
    // First pass caps file 0 at a whole copy; the remaining budget of 1 is
    // split 3:1 over the other two files.
    const auto model = PopularityModel::from_probs({0.6, 0.3, 0.1});
    const auto p = placements::proportional(model, 2.0);
    CHECK(p.q[0] == 1.0);
    CHECK(p.q[1] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(p.q[2] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("zero-popularity files soak up leftover budget evenly") {
    const auto model = PopularityModel::from_probs({0.7, 0.3, 0.0, 0.0});
    const auto p = placements::proportional(model, 3.0);
    CHECK(p.q[0] == 1.0);
    CHECK(p.q[1] == 1.0);
    CHECK(p.q[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.q[3] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("proportional on a uniform library coincides with uniform") {
  const auto zipf = PopularityModel::zipf(8, 0.0);
  const auto prop = placements::proportional(zipf, 3.0);
  const auto unif = placements::uniform(8, 3.0);
  for (int j = 0; j < 8; ++j)
    CHECK(prop.q[j] == doctest::Approx(unif.q[j]).epsilon(1e-12));
}

TEST_CASE("proportional exhausts the budget and preserves popularity order") {
  SubstreamRng rng(5150, 0);
  for (int instance = 0; instance < 100; ++instance) {
    const int n = 2 + static_cast<int>(rng.next_below(40));
    const double alpha = 2.0 * rng.next_unit();
    const double budget = rng.next_unit() * n;
    const auto zipf = PopularityModel::zipf(n, alpha);
    const auto p = placements::proportional(zipf, budget);

    CHECK(total(p) == doctest::Approx(budget).epsilon(1e-9));
    for (int j = 1; j < n; ++j) CHECK(p.q[j] <= p.q[j - 1] + 1e-12);
    for (double v : p.q) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }

    // Idempotence: the result is a fixed point of one more redistribution
    // pass with the final budget and mass.
    double capped = 0.0, mass = 0.0;
    for (int j = 0; j < n; ++j) {
      if (p.q[j] == 1.0) capped += 1.0;
      else mass += zipf.prob(j);
    }
    for (int j = 0; j < n; ++j) {
      if (p.q[j] == 1.0) continue;
      const double share = zipf.prob(j) * (budget - capped) / mass;
      CHECK(p.q[j] == doctest::Approx(share).epsilon(1e-9));
      CHECK(share < 1.0 + 1e-12);
    }
  }
}

TEST_CASE("full budget caps every file") {
  const auto zipf = PopularityModel::zipf(6, 1.2);
  const auto p = placements::proportional(zipf, 6.0);
  for (double v : p.q) CHECK(v == 1.0);
}

TEST_CASE("integer realization uses largest remainders") {
  Placement p;
  p.cache_capacity = 2.0;
  p.q = {0.5, 0.5, 0.5, 0.5};
  CHECK(to_integer(p, 10) == std::vector<int>{5, 5, 5, 5});

  Placement thirds;
  thirds.cache_capacity = 1.0;
  thirds.q = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  CHECK(to_integer(thirds, 10) == std::vector<int>{4, 3, 3});

  SubstreamRng rng(808, 0);
  for (int instance = 0; instance < 200; ++instance) {
    const int n_files = 1 + static_cast<int>(rng.next_below(20));
    const int n_fragments = 1 + static_cast<int>(rng.next_below(200));
    Placement random;
    random.q.resize(n_files);
    double sum = 0.0;
    for (double& v : random.q) {
      v = rng.next_unit();
      sum += v;
    }
    random.cache_capacity = sum;
    const auto m = to_integer(random, n_fragments);
    long long sum_m = 0;
    for (int j = 0; j < n_files; ++j) {
      CHECK(m[j] >= 0);
      CHECK(m[j] <= n_fragments);
      CHECK(std::abs(m[j] - random.q[j] * n_fragments) <= 1.0 + 1e-9);
      sum_m += m[j];
    }
    CHECK(sum_m == std::llround(sum * n_fragments));
  }
}

TEST_CASE("placement validation and serialization") {
  Placement p;
  p.q = {0.2, 0.8};
  p.cache_capacity = 1.0;
  p.label = "unif";
  CHECK_NOTHROW(p.validate());

  const Placement restored = Placement::from_json(p.to_json());
  CHECK(restored.q == p.q);
  CHECK(restored.label == p.label);
  CHECK(restored.cache_capacity == p.cache_capacity);

  const std::string csv = p.to_csv();
  CHECK(csv.substr(0, csv.find('\n')) == "label,cache_capacity,file,q");
  CHECK(csv.find("unif,1,0,0.2") != std::string::npos);
  CHECK(csv.find("unif,1,1,0.8") != std::string::npos);

  p.q[0] = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.q[0] = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.q = {1.0, 1.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // budget exceeded
}

TEST_SUITE_END();
