#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "qfactory/encoding.hpp"
#include "qfactory/mp12.hpp"

namespace qfactory {

// Public index k = (A, b0).
struct Reg2Key {
  Mp12Key a;
  ZqVector b0;
};

// t_k = (R, (s0, e0)).
struct Reg2Trapdoor {
  Mp12Trapdoor r;
  ZqVector s0;
  SignedVector e0;
};

struct Reg2GenOptions {
  bool zero_trapdoor = false;
  // Test hook: e0 = 0, which makes every image two-regular.
  bool zero_key_error = false;
};

std::pair<Reg2Key, Reg2Trapdoor> reg2_gen(const LweParams& params, Rng& rng,
                                          Reg2GenOptions opts = {});

// LWE.Eval(A, (s, e)) + c b0; requires ||e||_inf <= mu.
ZqVector reg2_eval(const Reg2Key& key, const ZqVector& s, const SignedVector& e,
                   int c);
ZqVector reg2_eval(const Reg2Key& key, const Preimage& x);

// Both preimages: first has c = 0, second has c = 1.
struct TwoPreimages {
  Preimage first;
  Preimage second;
};

// Exactly one in-domain preimage: the image has no claw and the protocol aborts.
struct NoSecondPreimage {
  Preimage only;
};

struct InversionFailed {
  std::string reason;
};

using Reg2Inversion = std::variant<TwoPreimages, NoSecondPreimage, InversionFailed>;

Reg2Inversion reg2_inv(const Reg2Key& key, const Reg2Trapdoor& td, const ZqVector& b);

// Uniform domain point: s uniform in Z_q^n, e uniform in [-mu, mu]^m, c uniform.
Preimage sample_reg2_domain(const LweParams& params, Rng& rng);

}  // namespace qfactory
