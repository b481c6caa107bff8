#pragma once

#include <optional>
#include <utility>

#include "qfactory/params.hpp"
#include "qfactory/rng.hpp"
#include "qfactory/zq.hpp"

namespace qfactory {

// Public index of the injective LWE function: A = [A' | G - A'R], n x m.
struct Mp12Key {
  ZqMatrix a;
  LweParams params;
};

// Gaussian trapdoor R, m_bar x omega.
struct Mp12Trapdoor {
  SignedMatrix r;
};

struct LwePreimage {
  ZqVector s;
  SignedVector e;
};

struct LweGenOptions {
  // Test hook: R = 0, so the second key block is exactly G.
  bool zero_trapdoor = false;
};

std::pair<Mp12Key, Mp12Trapdoor> lwe_gen(const LweParams& params, Rng& rng,
                                         LweGenOptions opts = {});

// s^T A + e^T mod q; requires ||e||_inf <= mu.
ZqVector lwe_eval(const Mp12Key& key, const ZqVector& s, const SignedVector& e);

// Same map without the domain check (e may lie outside the mu box).
ZqVector lwe_eval_unchecked(const Mp12Key& key, const ZqVector& s,
                            const SignedVector& e);

// b'^T = b^T [R; I] = s^T G + (e_1^T R + e_2^T), gadget-decode s, then lift
// e = b - s^T A into (-q/2, q/2]. Fails (nullopt) when decoding fails or the
// recovered error has ||e||_2 > r_max.
std::optional<LwePreimage> lwe_inv(const Mp12Key& key, const Mp12Trapdoor& td,
                                   const ZqVector& b);

// True when the second block of A equals G - A'R for this trapdoor.
bool key_matches_trapdoor(const Mp12Key& key, const Mp12Trapdoor& td);

}  // namespace qfactory
