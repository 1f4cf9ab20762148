#pragma once

#include <cstdint>
#include <vector>

namespace mdscache {

// Systematic Reed-Solomon erasure code over GF(2^8).
//
// Packet i carries the values of the degree-<n polynomials interpolating the
// fragment bytes at field points 0..n-1, evaluated at field point i. The
// first n packets equal the fragments verbatim, and any n packets with
// distinct indices recover the file by Lagrange interpolation. At most 256
// packets exist per file (one per field point).

struct CodeParams {
  int n_fragments = 1;  // source symbols per file
  int n_packets = 1;    // total encoded packets

  void validate() const;  // throws std::invalid_argument
};

using Payload = std::vector<std::uint8_t>;

struct Packet {
  int index = 0;
  Payload payload;
};

// Returns n_packets packets; the first n_fragments are the input verbatim.
// Fragments must all have the same length.
std::vector<Packet> encode(const CodeParams& params,
                           const std::vector<Payload>& fragments);

// Recovers the original fragments from any n_fragments packets with distinct
// indices. Extra packets beyond the first n_fragments distinct ones are
// ignored.
std::vector<Payload> decode(const CodeParams& params,
                            const std::vector<Packet>& packets);

}  // namespace mdscache
