#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfactory/zq.hpp"

namespace qfactory {

// Parameter tuple of the delta-2 regular LWE function. Only (n, k, mu, mu')
// and B are stored; m_bar = 2n, omega = nk, m = m_bar + omega and the real
// quantities alpha, alpha', r_max are always recomputed from them.
struct LweParams {
  std::uint64_t n = 0;
  int k = 0;
  std::uint64_t mu = 0;
  // mu' as an exact rational mu_prime_num / mu_prime_den.
  std::uint64_t mu_prime_num = 0;
  std::uint64_t mu_prime_den = 1;
  // Gadget quality constant: 2 for power-of-two moduli.
  double gadget_base = 2.0;

  Modulus modulus() const { return Modulus(k); }
  u128 q() const { return u128{1} << k; }
  std::uint64_t m_bar() const { return 2 * n; }
  std::uint64_t omega() const { return n * static_cast<std::uint64_t>(k); }
  std::uint64_t m() const { return m_bar() + omega(); }
  long double mu_prime() const;
  long double alpha_prime() const;
  long double alpha() const;
  // Standard deviation of the trapdoor matrix R entries (alpha * q).
  long double trapdoor_sigma() const;
  // Standard deviation of the REG2 key error e0 (alpha' * q).
  long double key_error_sigma() const;
  long double r_max() const;
  // Bits used for each offset-binary error coordinate: ceil(log2(2 mu + 1)).
  int error_bits() const;
  // Length of the canonical preimage encoding (s, e, c).
  std::size_t domain_bits() const;

  // Returns a copy with mu replaced and mu' reset to mu / m.
  LweParams with_mu(std::uint64_t new_mu) const;

  std::string describe() const;
  bool operator==(const LweParams&) const = default;
};

// C in the inversion radius: exactly 1/sqrt(2 pi).
long double gaussian_constant();

// k = 5 ceil(log2 n) + 21, q = 2^k, m_bar = 2n, omega = nk, m = m_bar + omega,
// mu = ceil(2 m n sqrt(2 + k)), mu' = mu / m, B = 2.
LweParams gen_params(std::uint64_t n);

struct ConstraintViolation {
  int index;  // 1..6
  std::string detail;
};

struct ConstraintOptions {
  // Condition 5 proxy: n / alpha' <= n^poly_exponent.
  double poly_exponent = 16.0;
};

// Evaluates the six parameter requirements; an empty result means valid.
std::vector<ConstraintViolation> check_constraints(const LweParams& p,
                                                   ConstraintOptions opts = {});

// Throws kInvalidParams listing every violation.
void require_valid(const LweParams& p);

// Rejects structurally impossible tuples (k out of range, n = 0, mu = 0).
void require_well_formed(const LweParams& p);

}  // namespace qfactory
