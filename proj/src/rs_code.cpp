#include "mdscache/rs_code.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "mdscache/gf256.hpp"

namespace mdscache {
namespace {

using gf256::add;
using gf256::div;
using gf256::mul;

// Denominators of the Lagrange basis over the given points:
// den[k] = prod_{l != k} (points[k] - points[l]).
std::vector<std::uint8_t> lagrange_denominators(
    const std::vector<std::uint8_t>& points) {
  std::vector<std::uint8_t> den(points.size(), 1);
  for (std::size_t k = 0; k < points.size(); ++k)
    for (std::size_t l = 0; l < points.size(); ++l)
      if (l != k) den[k] = mul(den[k], add(points[k], points[l]));
  return den;
}

// Row of interpolation coefficients: row[k] is the weight of the value at
// points[k] when evaluating the interpolating polynomial at x. x must not
// itself be one of the points.
std::vector<std::uint8_t> interpolation_row(
    const std::vector<std::uint8_t>& points,
    const std::vector<std::uint8_t>& den, std::uint8_t x) {
  std::uint8_t full = 1;
  for (std::uint8_t p : points) full = mul(full, add(x, p));
  std::vector<std::uint8_t> row(points.size());
  for (std::size_t k = 0; k < points.size(); ++k)
    row[k] = div(div(full, add(x, points[k])), den[k]);
  return row;
}

Payload combine(const std::vector<std::uint8_t>& row,
                const std::vector<const Payload*>& sources, std::size_t len) {
  Payload out(len, 0);
  for (std::size_t k = 0; k < row.size(); ++k) {
    const std::uint8_t c = row[k];
    if (c == 0) continue;
    const Payload& src = *sources[k];
    for (std::size_t b = 0; b < len; ++b) out[b] ^= mul(c, src[b]);
  }
  return out;
}

}  // namespace

void CodeParams::validate() const {
  if (n_fragments < 1)
    throw std::invalid_argument("rs_code: n_fragments must be at least 1");
  if (n_packets < n_fragments)
    throw std::invalid_argument("rs_code: n_packets must be at least n_fragments");
  if (n_packets > gf256::kFieldSize)
    throw std::invalid_argument(
        "rs_code: n_packets exceeds GF(256) capacity of 256 packets");
}

std::vector<Packet> encode(const CodeParams& params,
                           const std::vector<Payload>& fragments) {
  params.validate();
  const int n = params.n_fragments;
  if (static_cast<int>(fragments.size()) != n)
    throw std::invalid_argument("rs_code: expected " + std::to_string(n) +
                                " fragments, got " +
                                std::to_string(fragments.size()));
  const std::size_t len = fragments.front().size();
  for (const Payload& f : fragments)
    if (f.size() != len)
      throw std::invalid_argument("rs_code: fragments must have equal length");

  std::vector<Packet> packets(params.n_packets);
  for (int i = 0; i < n; ++i) packets[i] = {i, fragments[i]};
  if (params.n_packets == n) return packets;

  std::vector<std::uint8_t> base(n);
  for (int k = 0; k < n; ++k) base[k] = static_cast<std::uint8_t>(k);
  const std::vector<std::uint8_t> den = lagrange_denominators(base);
  std::vector<const Payload*> sources(n);
  for (int k = 0; k < n; ++k) sources[k] = &fragments[k];

  for (int i = n; i < params.n_packets; ++i) {
    const auto row = interpolation_row(base, den, static_cast<std::uint8_t>(i));
    packets[i] = {i, combine(row, sources, len)};
  }
  return packets;
}

std::vector<Payload> decode(const CodeParams& params,
                            const std::vector<Packet>& packets) {
  params.validate();
  const int n = params.n_fragments;

  // Select the first n packets, rejecting duplicates and bad indices.
  std::vector<const Packet*> used;
  used.reserve(n);
  std::array<bool, 256> seen{};
  for (const Packet& p : packets) {
    if (p.index < 0 || p.index >= params.n_packets)
      throw std::invalid_argument("rs_code: packet index out of range");
    if (seen[p.index])
      throw std::invalid_argument("rs_code: duplicate packet indices");
    seen[p.index] = true;
    if (static_cast<int>(used.size()) < n) used.push_back(&p);
  }
  if (static_cast<int>(used.size()) < n)
    throw std::invalid_argument("rs_code: insufficient packets (" +
                                std::to_string(used.size()) + " of " +
                                std::to_string(n) + ")");

  const std::size_t len = used.front()->payload.size();
  std::vector<std::uint8_t> points(n);
  std::vector<const Payload*> sources(n);
  std::array<const Packet*, 256> by_index{};
  for (int k = 0; k < n; ++k) {
    const Packet* p = used[k];
    if (p->payload.size() != len)
      throw std::invalid_argument("rs_code: packets must have equal length");
    points[k] = static_cast<std::uint8_t>(p->index);
    sources[k] = &p->payload;
    by_index[p->index] = p;
  }
  const std::vector<std::uint8_t> den = lagrange_denominators(points);

  std::vector<Payload> fragments(n);
  for (int t = 0; t < n; ++t) {
    if (const Packet* direct = by_index[t]) {
      fragments[t] = direct->payload;  // systematic packet was collected
      continue;
    }
    const auto row = interpolation_row(points, den, static_cast<std::uint8_t>(t));
    fragments[t] = combine(row, sources, len);
  }
  return fragments;
}

}  // namespace mdscache
