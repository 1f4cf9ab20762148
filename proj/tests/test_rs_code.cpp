#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <numeric>
#include <vector>

#include "mdscache/rng.hpp"
#include "mdscache/rs_code.hpp"

using namespace mdscache;

namespace {

std::vector<Payload> random_fragments(int n, std::size_t len, std::uint64_t seed) {
  SubstreamRng rng(seed, 0);
  std::vector<Payload> fragments(n);
  for (Payload& f : fragments) {
    f.resize(len);
    for (auto& b : f) b = static_cast<std::uint8_t>(rng.next_below(256));
  }
  return fragments;
}

// Walk every k-subset of {0..total-1}, calling visit(subset).
template <class Visit>
void for_each_subset(int total, int k, Visit visit) {
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    visit(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == total - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

TEST_SUITE_BEGIN("rs_code");

TEST_CASE("single source symbol becomes a repetition code") {
  const CodeParams params{1, 3};
  const std::vector<Payload> fragments{{0xAB}};
  const auto packets = encode(params, fragments);
  REQUIRE(packets.size() == 3);
  for (const Packet& p : packets) {
    const auto decoded = decode(params, {p});
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0] == Payload{0xAB});
  }
}

TEST_CASE("n_packets == n_fragments is the identity code") {
  for (int k : {1, 2, 5, 17}) {
    const CodeParams params{k, k};
    const auto fragments = random_fragments(k, 9, 100 + k);
    const auto packets = encode(params, fragments);
    REQUIRE(static_cast<int>(packets.size()) == k);
    for (int i = 0; i < k; ++i) CHECK(packets[i].payload == fragments[i]);
    CHECK(decode(params, packets) == fragments);
  }
}

TEST_CASE("all pairs of a (2,4) code decode the source") {
  const CodeParams params{2, 4};
  const std::vector<Payload> fragments{{1}, {2}};
  const auto packets = encode(params, fragments);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      CHECK(decode(params, {packets[a], packets[b]}) == fragments);
}

TEST_CASE("systematic prefix equals the fragments byte for byte") {
  const CodeParams params{5, 11};
  const auto fragments = random_fragments(5, 33, 7);
  const auto packets = encode(params, fragments);
  for (int i = 0; i < 5; ++i) {
    CHECK(packets[i].index == i);
    CHECK(packets[i].payload == fragments[i]);
  }
}

TEST_CASE("every n-subset decodes, exhaustively up to 12 packets") {
  int subsets = 0;
  for (int total = 1; total <= 12; ++total) {
    for (int n = 1; n <= total; ++n) {
      const CodeParams params{n, total};
      const auto fragments = random_fragments(n, 5, total * 31 + n);
      const auto packets = encode(params, fragments);
      for_each_subset(total, n, [&](const std::vector<int>& pick) {
        std::vector<Packet> subset;
        for (int i : pick) subset.push_back(packets[i]);
        CHECK(decode(params, subset) == fragments);
        ++subsets;
      });
    }
  }
  CHECK(subsets > 8000);
}

TEST_CASE("random n-subsets decode for larger codes") {
  const CodeParams params{40, 200};
  const auto fragments = random_fragments(40, 8, 99);
  const auto packets = encode(params, fragments);
  SubstreamRng rng(555, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    // partial Fisher-Yates over packet indices
    std::vector<int> order(params.n_packets);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Packet> subset;
    for (int k = 0; k < params.n_fragments; ++k) {
      const int pick = k + static_cast<int>(rng.next_below(params.n_packets - k));
      std::swap(order[k], order[pick]);
      subset.push_back(packets[order[k]]);
    }
    CHECK(decode(params, subset) == fragments);
  }
}

TEST_CASE("full field capacity round-trips") {
  const CodeParams params{100, 256};
  const auto fragments = random_fragments(100, 4, 1234);
  const auto packets = encode(params, fragments);
  std::vector<Packet> tail(packets.end() - 100, packets.end());
  CHECK(decode(params, tail) == fragments);
}

TEST_CASE("error paths") {
  const CodeParams params{4, 8};
  const auto fragments = random_fragments(4, 6, 3);
  const auto packets = encode(params, fragments);

  SUBCASE("insufficient packets") {
    const std::vector<Packet> three(packets.begin(), packets.begin() + 3);
    CHECK_THROWS_WITH_AS(decode(params, three),
                         doctest::Contains("insufficient packets"),
                         std::invalid_argument);
  }
  SUBCASE("duplicate indices") {
    std::vector<Packet> dup{packets[0], packets[0], packets[1], packets[2]};
    CHECK_THROWS_WITH_AS(decode(params, dup), doctest::Contains("duplicate"),
                         std::invalid_argument);
  }
  SUBCASE("fragment length mismatch") {
    auto bad = fragments;
    bad[2].pop_back();
    CHECK_THROWS_AS(encode(params, bad), std::invalid_argument);
  }
  SUBCASE("wrong fragment count") {
    auto bad = fragments;
    bad.pop_back();
    CHECK_THROWS_AS(encode(params, bad), std::invalid_argument);
  }
  SUBCASE("field capacity") {
    CHECK_THROWS_WITH_AS(CodeParams({2, 257}).validate(),
                         doctest::Contains("capacity"), std::invalid_argument);
  }
  SUBCASE("bad params") {
    CHECK_THROWS_AS(CodeParams({0, 4}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(CodeParams({5, 4}).validate(), std::invalid_argument);
  }
}

TEST_SUITE_END();
