#pragma once

#include <cstdint>

#include "qfactory/params.hpp"
#include "qfactory/reg2.hpp"

namespace qfactory {

struct DeltaEstimate {
  std::uint64_t trials = 0;
  std::uint64_t two_preimages = 0;
  std::uint64_t one_preimage = 0;
  std::uint64_t failures = 0;
  // Claws whose re-evaluation, c-bits or (s0, e0) difference were wrong.
  std::uint64_t claw_violations = 0;
  double point = 0.0;
  double standard_error = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

struct DeltaOptions {
  Reg2GenOptions gen;
};

// Monte Carlo over fresh keys and uniform domain points. Trial i draws from
// its own stream (seed, i), so the estimate does not depend on thread count.
DeltaEstimate estimate_delta(const LweParams& params, std::uint64_t trials,
                             std::uint64_t seed, DeltaOptions opts = {});

// Closed form (1 - mu'/(4 mu))^m.
double domain_addition_probability(std::uint64_t m, double mu, double mu_prime);

struct MonteCarloResult {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double fraction = 0.0;
  double standard_error = 0.0;
};

// e0 uniform in [-mu', mu']^m, e1 uniform in [-mu, mu]^m (continuous);
// counts ||e0 + e1||_inf <= mu.
MonteCarloResult monte_carlo_domain_addition(std::uint64_t m, double mu,
                                             double mu_prime, std::uint64_t trials,
                                             std::uint64_t seed);

// 95% Wilson score interval.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials);

}  // namespace qfactory
