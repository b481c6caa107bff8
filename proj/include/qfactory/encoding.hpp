#pragma once

#include "qfactory/params.hpp"
#include "qfactory/zq.hpp"

namespace qfactory {

// A point (s, e, c) of the REG2 domain.
struct Preimage {
  ZqVector s;
  SignedVector e;
  int c = 0;

  bool operator==(const Preimage&) const = default;
};

// Canonical bit layout, frozen: each s_i as k bits little-endian, then each
// e_i as (e_i + mu) in error_bits() bits little-endian, then c as the final
// bit. The protocol's output qubit is that final bit.
BitString encode_preimage(const ZqVector& s, const SignedVector& e, int c,
                          const LweParams& params);
BitString encode_preimage(const Preimage& x, const LweParams& params);
Preimage decode_preimage(const BitString& bits, const LweParams& params);

// Packs bits little-endian into bytes (bit i -> byte i/8, bit i%8).
std::vector<std::uint8_t> pack_bits(const BitString& bits);
BitString unpack_bits(std::span<const std::uint8_t> bytes, std::size_t count);

}  // namespace qfactory
