#include "qfactory/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace qfactory {

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

bool claw_is_valid(const Reg2Key& key, const Reg2Trapdoor& td, const ZqVector& y,
                   const TwoPreimages& claw) {
  if (claw.first.c == claw.second.c) return false;
  if (!(reg2_eval(key, claw.first) == y)) return false;
  if (!(reg2_eval(key, claw.second) == y)) return false;
  return claw.first.s - claw.second.s == td.s0 && claw.first.e - claw.second.e == td.e0;
}

}  // namespace

DeltaEstimate estimate_delta(const LweParams& params, std::uint64_t trials,
                             std::uint64_t seed, DeltaOptions opts) {
  if (trials < 100) {
    throw Error(ErrorCode::kInvalidArgument, "estimate_delta needs at least 100 trials");
  }
  require_valid(params);
  std::uint64_t two = 0, one = 0, failed = 0, bad_claws = 0;
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for reduction(+ : two, one, failed, bad_claws) schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    auto [key, td] = reg2_gen(params, rng, opts.gen);
    Preimage x = sample_reg2_domain(params, rng);
    ZqVector y = reg2_eval(key, x);
    Reg2Inversion inv = reg2_inv(key, td, y);
    if (auto* claw = std::get_if<TwoPreimages>(&inv)) {
      ++two;
      if (!claw_is_valid(key, td, y, *claw)) ++bad_claws;
    } else if (std::holds_alternative<NoSecondPreimage>(inv)) {
      ++one;
    } else {
      ++failed;
    }
  }
  DeltaEstimate est;
  est.trials = trials;
  est.two_preimages = two;
  est.one_preimage = one;
  est.failures = failed;
  est.claw_violations = bad_claws;
  est.point = static_cast<double>(two) / static_cast<double>(trials);
  est.standard_error = std::sqrt(est.point * (1 - est.point) / static_cast<double>(trials));
  std::tie(est.wilson_low, est.wilson_high) = wilson_interval(two, trials);
  return est;
}

double domain_addition_probability(std::uint64_t m, double mu, double mu_prime) {
  if (!(mu_prime > 0 && mu_prime < mu)) {
    throw Error(ErrorCode::kInvalidArgument, "domain addition needs 0 < mu' < mu");
  }
  return std::pow(1.0 - mu_prime / (4.0 * mu), static_cast<double>(m));
}

MonteCarloResult monte_carlo_domain_addition(std::uint64_t m, double mu,
                                             double mu_prime, std::uint64_t trials,
                                             std::uint64_t seed) {
  if (!(mu_prime > 0 && mu_prime < mu)) {
    throw Error(ErrorCode::kInvalidArgument, "domain addition needs 0 < mu' < mu");
  }
  std::uint64_t hits = 0;
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for reduction(+ : hits) schedule(static)
  for (std::int64_t t = 0; t < count; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    bool inside = true;
    for (std::uint64_t i = 0; i < m; ++i) {
      double e0 = rng.uniform_real(-mu_prime, mu_prime);
      double e1 = rng.uniform_real(-mu, mu);
      if (std::abs(e0 + e1) > mu) {
        inside = false;
        break;
      }
    }
    if (inside) ++hits;
  }
  MonteCarloResult r;
  r.trials = trials;
  r.hits = hits;
  r.fraction = static_cast<double>(hits) / static_cast<double>(trials);
  r.standard_error = std::sqrt(r.fraction * (1 - r.fraction) / static_cast<double>(trials));
  return r;
}

}  // namespace qfactory
