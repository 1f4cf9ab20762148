#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace mdscache::gf256 {

// Arithmetic in GF(2^8) with reducing polynomial x^8+x^4+x^3+x^2+1 (0x11D).
// Tables are built at compile time and are read-only afterwards, so all
// operations are safe to call concurrently.

inline constexpr unsigned kPoly = 0x11D;
inline constexpr int kFieldSize = 256;

namespace detail {

struct Tables {
  std::array<std::uint8_t, 255> exp{};
  std::array<std::uint8_t, 256> log{};  // log[0] is unused
};

constexpr Tables build_tables() {
  Tables t{};
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100u) x ^= kPoly;
  }
  return t;
}

inline constexpr Tables tables = build_tables();

}  // namespace detail

inline constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) {
  return a ^ b;
}

// Subtraction coincides with addition in characteristic 2.
inline constexpr std::uint8_t sub(std::uint8_t a, std::uint8_t b) {
  return a ^ b;
}

inline constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  int s = detail::tables.log[a] + detail::tables.log[b];
  if (s >= 255) s -= 255;
  return detail::tables.exp[static_cast<std::size_t>(s)];
}

inline constexpr std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf256: zero has no inverse");
  return detail::tables.exp[static_cast<std::size_t>(255 - detail::tables.log[a]) % 255];
}

inline constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw std::domain_error("gf256: division by zero");
  if (a == 0) return 0;
  int s = detail::tables.log[a] - detail::tables.log[b];
  if (s < 0) s += 255;
  return detail::tables.exp[static_cast<std::size_t>(s)];
}

inline constexpr std::uint8_t exp(int power) {
  power %= 255;
  if (power < 0) power += 255;
  return detail::tables.exp[static_cast<std::size_t>(power)];
}

inline constexpr int log(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf256: log of zero");
  return detail::tables.log[a];
}

}  // namespace mdscache::gf256
