#include "qfactory/encoding.hpp"

namespace qfactory {

BitString encode_preimage(const ZqVector& s, const SignedVector& e, int c,
                          const LweParams& params) {
  if (s.size() != params.n || e.size() != params.m()) {
    throw Error(ErrorCode::kDimensionMismatch, "preimage dimensions do not match params");
  }
  if (s.modulus().bits() != params.k) {
    throw Error(ErrorCode::kDimensionMismatch, "secret modulus does not match params");
  }
  if (c != 0 && c != 1) throw Error(ErrorCode::kInvalidArgument, "c must be a bit");
  const auto mu = static_cast<std::int64_t>(params.mu);
  if (e.inf_norm() > mu) {
    throw Error(ErrorCode::kNormViolation,
                "||e||_inf = " + std::to_string(e.inf_norm()) + " exceeds mu = " +
                    std::to_string(mu));
  }
  BitString bits;
  bits.reserve(params.domain_bits());
  for (auto v : s.values()) {
    for (int j = 0; j < params.k; ++j) bits.push_back(static_cast<std::uint8_t>((v >> j) & 1));
  }
  const int w = params.error_bits();
  for (auto v : e.entries) {
    auto offset = static_cast<std::uint64_t>(v + mu);
    for (int j = 0; j < w; ++j) bits.push_back(static_cast<std::uint8_t>((offset >> j) & 1));
  }
  bits.push_back(static_cast<std::uint8_t>(c));
  return bits;
}

BitString encode_preimage(const Preimage& x, const LweParams& params) {
  return encode_preimage(x.s, x.e, x.c, params);
}

Preimage decode_preimage(const BitString& bits, const LweParams& params) {
  if (bits.size() != params.domain_bits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "encoded preimage has " + std::to_string(bits.size()) + " bits, expected " +
                    std::to_string(params.domain_bits()));
  }
  const Modulus mod = params.modulus();
  std::size_t pos = 0;
  Preimage out{ZqVector(params.n, mod), SignedVector{}, 0};
  for (std::size_t i = 0; i < params.n; ++i) {
    u128 v = 0;
    for (int j = 0; j < params.k; ++j) v |= static_cast<u128>(bits[pos++] & 1) << j;
    out.s.set(i, v);
  }
  const int w = params.error_bits();
  const auto mu = static_cast<std::int64_t>(params.mu);
  out.e.entries.resize(params.m());
  for (auto& v : out.e.entries) {
    std::uint64_t offset = 0;
    for (int j = 0; j < w; ++j) offset |= static_cast<std::uint64_t>(bits[pos++] & 1) << j;
    if (offset > static_cast<std::uint64_t>(2 * mu)) {
      throw Error(ErrorCode::kNormViolation, "encoded error coordinate exceeds mu");
    }
    v = static_cast<std::int64_t>(offset) - mu;
  }
  out.c = bits[pos] & 1;
  return out;
}

std::vector<std::uint8_t> pack_bits(const BitString& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

BitString unpack_bits(std::span<const std::uint8_t> bytes, std::size_t count) {
  if (bytes.size() * 8 < count) {
    throw Error(ErrorCode::kParse, "not enough bytes for bit string");
  }
  BitString out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = (bytes[i / 8] >> (i % 8)) & 1;
  return out;
}

}  // namespace qfactory
