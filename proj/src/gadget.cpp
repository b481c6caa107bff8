#include "qfactory/gadget.hpp"

namespace qfactory {

ZqMatrix gadget_matrix(std::size_t n, int k) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "gadget n must be >= 1");
  Modulus mod(k);
  const std::size_t kk = static_cast<std::size_t>(k);
  ZqMatrix g(n, n * kk, mod);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kk; ++j) g.set(i, i * kk + j, u128{1} << j);
  }
  return g;
}

std::optional<ZqVector> gadget_invert(const ZqVector& b, std::size_t n, int k) {
  const Modulus& mod = b.modulus();
  const std::size_t kk = static_cast<std::size_t>(k);
  if (mod.bits() != k || b.size() != n * kk) {
    throw Error(ErrorCode::kDimensionMismatch,
                "gadget_invert expects a length n*k vector mod 2^k");
  }
  const u128 quarter = mod.q() >> 2;
  ZqVector s(n, mod);
  for (std::size_t i = 0; i < n; ++i) {
    const u128* col = b.values().data() + i * kk;
    u128 known = 0;
    for (std::size_t j = kk; j-- > 0;) {
      // b_j - 2^j * known = 2^{k-1} * bit + e_j (mod q), bit = bit (k-1-j) of s_i.
      u128 v = mod.sub(col[j], mod.mul(u128{1} << j, known));
      u128 bit = mod.add(v, quarter) >= mod.half() ? 1 : 0;
      known |= bit << (kk - 1 - j);
    }
    for (std::size_t j = 0; j < kk; ++j) {
      i128 e = mod.lift(mod.sub(col[j], mod.mul(u128{1} << j, known)));
      i128 mag = e < 0 ? -e : e;
      if (k >= 2 && mag >= static_cast<i128>(quarter)) return std::nullopt;
      if (k == 1 && mag != 0) return std::nullopt;
    }
    s.set(i, known);
  }
  return s;
}

}  // namespace qfactory
