#include "qfactory/reg2.hpp"

namespace qfactory {

std::pair<Reg2Key, Reg2Trapdoor> reg2_gen(const LweParams& params, Rng& rng,
                                          Reg2GenOptions opts) {
  auto [a, r] = lwe_gen(params, rng, LweGenOptions{opts.zero_trapdoor});
  const Modulus mod = params.modulus();
  ZqVector s0 = sample_uniform_vector(params.n, mod, rng);
  SignedVector e0;
  if (opts.zero_key_error) {
    e0.entries.assign(params.m(), 0);
  } else {
    e0 = sample_gaussian_vector(params.m(), static_cast<double>(params.key_error_sigma()),
                                rng);
  }
  ZqVector b0 = lwe_eval(a, s0, e0);
  return {Reg2Key{std::move(a), std::move(b0)},
          Reg2Trapdoor{std::move(r), std::move(s0), std::move(e0)}};
}

ZqVector reg2_eval(const Reg2Key& key, const ZqVector& s, const SignedVector& e,
                   int c) {
  if (c != 0 && c != 1) throw Error(ErrorCode::kInvalidArgument, "c must be a bit");
  ZqVector y = lwe_eval(key.a, s, e);
  return c == 1 ? y + key.b0 : y;
}

ZqVector reg2_eval(const Reg2Key& key, const Preimage& x) {
  return reg2_eval(key, x.s, x.e, x.c);
}

Reg2Inversion reg2_inv(const Reg2Key& key, const Reg2Trapdoor& td, const ZqVector& b) {
  auto lwe = lwe_inv(key.a, td.r, b);
  if (!lwe) return InversionFailed{"lwe inversion failed"};
  const auto mu = static_cast<std::int64_t>(key.a.params.mu);

  Preimage zero{lwe->s, lwe->e, 0};
  Preimage one{lwe->s - td.s0, lwe->e - td.e0, 1};
  const bool zero_ok = zero.e.inf_norm() <= mu;
  const bool one_ok = one.e.inf_norm() <= mu;
  if (zero_ok && one_ok) return TwoPreimages{std::move(zero), std::move(one)};
  if (zero_ok) return NoSecondPreimage{std::move(zero)};
  if (one_ok) return NoSecondPreimage{std::move(one)};
  return InversionFailed{"image has no preimage inside the error box"};
}

Preimage sample_reg2_domain(const LweParams& params, Rng& rng) {
  const Modulus mod = params.modulus();
  Preimage x{sample_uniform_vector(params.n, mod, rng),
             sample_bounded_vector(params.m(), static_cast<std::int64_t>(params.mu), rng),
             rng.bit()};
  return x;
}

}  // namespace qfactory
