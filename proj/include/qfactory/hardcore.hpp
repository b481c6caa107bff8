#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfactory/zq.hpp"

namespace qfactory {

// Euclidean remainder in [0, m) for any sign of a.
std::int64_t emod(std::int64_t a, std::int64_t m);

struct HardcoreInputs {
  std::vector<int> z;  // z_i = x_i - x'_i in {-1, 0, 1}
  BitString x_tilde;   // x xor x'
  BitString alpha1;    // most significant bit of each alpha_i
  BitString alpha2;
  BitString alpha3;    // least significant bit
  BitString b;

  // Uses the first `terms` positions (default: all but the output bit).
  static HardcoreInputs from_claw(const BitString& x, const BitString& xp,
                                  const std::vector<int>& alphas, const BitString& b,
                                  std::optional<std::size_t> terms = std::nullopt);
  static HardcoreInputs from_vectors(const std::vector<int>& z, const std::vector<int>& alphas,
                                     const BitString& b);

  // Throws kInvalidArgument when the fields disagree (|z_i| != x_tilde_i, lengths).
  void validate() const;
};

struct HardcoreSums {
  std::int64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
};

HardcoreSums hardcore_sums(const HardcoreInputs& in);

// (B1, B2, B3) from the closed forms; 4 B1 + 2 B2 + B3 = sum z_i (4 b_i + alpha_i) mod 8.
std::array<int, 3> hardcore_bits(const HardcoreInputs& in);

// sum z_i (4 b_i + alpha_i) mod 8, evaluated directly.
int hardcore_direct(const HardcoreInputs& in);

struct IdentityReport {
  std::uint64_t identity_checks = 0;
  std::uint64_t decomposition_checks = 0;
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

// The seven modular identities over random naturals and signed integers.
IdentityReport verify_identities(std::uint64_t trials, std::uint64_t seed);

// Decomposition identity: exhaustive over every (z, alpha, b) of length
// <= exhaustive_n, then `trials` random instances of length 1..n_max. Also
// checks claw-derived inputs with n - 1 and n terms against the direct sum.
IdentityReport verify_decomposition(std::uint64_t trials, std::size_t n_max, std::uint64_t seed,
                                    std::size_t exhaustive_n = 4);

// Both of the above.
IdentityReport verify_identity_suite(std::uint64_t trials, std::size_t n_max, std::uint64_t seed);

}  // namespace qfactory
