#include "qfactory/mp12.hpp"

#include <cmath>
#include <limits>

#include "qfactory/gadget.hpp"
#include "qfactory/kernels.hpp"

namespace qfactory {

std::pair<Mp12Key, Mp12Trapdoor> lwe_gen(const LweParams& params, Rng& rng,
                                         LweGenOptions opts) {
  require_valid(params);
  const Modulus mod = params.modulus();
  const std::size_t n = params.n;
  const std::size_t m_bar = params.m_bar();
  const std::size_t omega = params.omega();

  ZqMatrix a_prime = sample_uniform_matrix(n, m_bar, mod, rng);
  Mp12Trapdoor td;
  if (opts.zero_trapdoor) {
    td.r = SignedMatrix{m_bar, omega, std::vector<std::int64_t>(m_bar * omega, 0)};
  } else {
    td.r = sample_gaussian_matrix(m_bar, omega,
                                  static_cast<double>(params.trapdoor_sigma()), rng);
  }
  ZqMatrix second = gadget_matrix(n, params.k) - zq_matmul(a_prime, td.r.embed(mod));
  return {Mp12Key{ZqMatrix::hconcat(a_prime, second), params}, std::move(td)};
}

ZqVector lwe_eval_unchecked(const Mp12Key& key, const ZqVector& s,
                            const SignedVector& e) {
  const Modulus mod = key.params.modulus();
  if (s.size() != key.a.rows() || e.size() != key.a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "lwe_eval input dimensions");
  }
  return zq_vecmat(s, key.a) + e.embed(mod);
}

ZqVector lwe_eval(const Mp12Key& key, const ZqVector& s, const SignedVector& e) {
  if (e.inf_norm() > static_cast<std::int64_t>(key.params.mu)) {
    throw Error(ErrorCode::kNormViolation,
                "||e||_inf = " + std::to_string(e.inf_norm()) + " exceeds mu = " +
                    std::to_string(key.params.mu));
  }
  return lwe_eval_unchecked(key, s, e);
}

std::optional<LwePreimage> lwe_inv(const Mp12Key& key, const Mp12Trapdoor& td,
                                   const ZqVector& b) {
  const LweParams& p = key.params;
  const Modulus mod = p.modulus();
  const std::size_t m_bar = p.m_bar();
  const std::size_t omega = p.omega();
  if (b.size() != p.m()) {
    throw Error(ErrorCode::kDimensionMismatch, "lwe_inv expects a length-m vector");
  }
  if (td.r.rows != m_bar || td.r.cols != omega) {
    throw Error(ErrorCode::kDimensionMismatch, "trapdoor shape does not match params");
  }

  // b' = b_top^T R + b_bottom^T.
  ZqVector top(std::vector<u128>(b.values().begin(), b.values().begin() + m_bar), mod);
  ZqVector bottom(std::vector<u128>(b.values().begin() + m_bar, b.values().end()), mod);
  ZqVector b_prime = zq_vecmat(top, td.r.embed(mod)) + bottom;

  auto s = gadget_invert(b_prime, p.n, p.k);
  if (!s) return std::nullopt;

  ZqVector residual = b - zq_vecmat(*s, key.a);
  SignedVector e;
  e.entries.reserve(residual.size());
  for (auto v : residual.values()) {
    i128 lifted = mod.lift(v);
    if (lifted > std::numeric_limits<std::int64_t>::max() ||
        lifted < -std::numeric_limits<std::int64_t>::max()) {
      return std::nullopt;
    }
    e.entries.push_back(static_cast<std::int64_t>(lifted));
  }
  if (e.l2_norm() > p.r_max()) return std::nullopt;
  // Re-evaluate before returning; a mismatch means the decode was wrong.
  if (!(lwe_eval_unchecked(key, *s, e) == b)) return std::nullopt;
  return LwePreimage{std::move(*s), std::move(e)};
}

bool key_matches_trapdoor(const Mp12Key& key, const Mp12Trapdoor& td) {
  const LweParams& p = key.params;
  const Modulus mod = p.modulus();
  ZqMatrix a_prime = key.a.column_block(0, p.m_bar());
  ZqMatrix second = key.a.column_block(p.m_bar(), p.omega());
  return second == gadget_matrix(p.n, p.k) - zq_matmul(a_prime, td.r.embed(mod));
}

}  // namespace qfactory
