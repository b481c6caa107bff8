#include "qfactory/params.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace qfactory {

namespace {

using boost::multiprecision::cpp_int;
using Float50 = boost::multiprecision::cpp_bin_float_50;

cpp_int to_big(u128 v) {
  cpp_int hi = static_cast<std::uint64_t>(v >> 64);
  cpp_int lo = static_cast<std::uint64_t>(v);
  return (hi << 64) | lo;
}

std::uint64_t ceil_log2(std::uint64_t n) {
  return n <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(n - 1));
}

// Smallest integer r with r^2 >= x.
cpp_int ceil_sqrt(const cpp_int& x) {
  cpp_int r = boost::multiprecision::sqrt(x);  // floor
  if (r * r < x) ++r;
  return r;
}

Float50 r_max_exact(const LweParams& p) {
  using boost::multiprecision::sqrt;
  Float50 n = Float50(p.n);
  Float50 k = Float50(p.k);
  Float50 m = Float50(p.m());
  Float50 q = Float50(to_big(p.q()));
  Float50 mu_prime = Float50(p.mu_prime_num) / Float50(p.mu_prime_den);
  Float50 alpha_q = sqrt(m) * mu_prime;  // alpha * q = m * alpha' * q
  Float50 c = 1 / sqrt(2 * boost::math::constants::pi<Float50>());
  Float50 spread = sqrt(2 * n) + sqrt(k * n) + sqrt(n);
  Float50 t = c * alpha_q * spread;
  return q / (2 * Float50(p.gadget_base) * sqrt(t * t + 1));
}

}  // namespace

long double gaussian_constant() {
  return 1.0L / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
}

long double LweParams::mu_prime() const {
  return static_cast<long double>(mu_prime_num) /
         static_cast<long double>(mu_prime_den);
}

long double LweParams::alpha_prime() const {
  return mu_prime() / (std::sqrt(static_cast<long double>(m())) *
                       static_cast<long double>(q()));
}

long double LweParams::alpha() const {
  return static_cast<long double>(m()) * alpha_prime();
}

long double LweParams::trapdoor_sigma() const {
  return std::sqrt(static_cast<long double>(m())) * mu_prime();
}

long double LweParams::key_error_sigma() const {
  return mu_prime() / std::sqrt(static_cast<long double>(m()));
}

long double LweParams::r_max() const {
  return static_cast<long double>(r_max_exact(*this));
}

int LweParams::error_bits() const {
  std::uint64_t span = 2 * mu + 1;
  return static_cast<int>(ceil_log2(span));
}

std::size_t LweParams::domain_bits() const {
  return static_cast<std::size_t>(n * static_cast<std::uint64_t>(k) +
                                  m() * static_cast<std::uint64_t>(error_bits()) + 1);
}

LweParams LweParams::with_mu(std::uint64_t new_mu) const {
  LweParams out = *this;
  out.mu = new_mu;
  out.mu_prime_num = new_mu;
  out.mu_prime_den = m();
  return out;
}

std::string LweParams::describe() const {
  std::ostringstream os;
  os << "n=" << n << " k=" << k << " m=" << m() << " mu=" << mu
     << " mu'=" << mu_prime_num << "/" << mu_prime_den;
  return os.str();
}

void require_well_formed(const LweParams& p) {
  if (p.n < 1) throw Error(ErrorCode::kInvalidParams, "n must be >= 1");
  if (p.k < 1 || p.k > Modulus::kMaxBits) {
    throw Error(ErrorCode::kInvalidParams,
                "k must be in [1, 127], got " + std::to_string(p.k));
  }
  if (p.mu < 1) throw Error(ErrorCode::kInvalidParams, "mu must be >= 1");
  if (p.mu_prime_den == 0) {
    throw Error(ErrorCode::kInvalidParams, "mu' denominator is zero");
  }
  if (p.mu > (std::uint64_t{1} << 61)) {
    throw Error(ErrorCode::kInvalidParams, "mu exceeds the 61-bit error range");
  }
}

LweParams gen_params(std::uint64_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "gen_params needs n >= 2");
  std::uint64_t k = 5 * ceil_log2(n) + 21;
  if (k > static_cast<std::uint64_t>(Modulus::kMaxBits)) {
    throw Error(ErrorCode::kInvalidParams,
                "k = " + std::to_string(k) + " exceeds 127 for n = " + std::to_string(n));
  }
  LweParams p;
  p.n = n;
  p.k = static_cast<int>(k);
  // mu = ceil(2 m n sqrt(2 + k)) = ceil(sqrt(4 m^2 n^2 (2 + k))), exactly.
  cpp_int m = p.m();
  cpp_int radicand = 4 * m * m * cpp_int(n) * cpp_int(n) * cpp_int(2 + k);
  cpp_int mu = ceil_sqrt(radicand);
  if (mu > cpp_int(std::uint64_t{1} << 61)) {
    throw Error(ErrorCode::kInvalidParams, "mu overflows for n = " + std::to_string(n));
  }
  p = p.with_mu(static_cast<std::uint64_t>(mu));
  p.gadget_base = 2.0;
  return p;
}

std::vector<ConstraintViolation> check_constraints(const LweParams& p,
                                                   ConstraintOptions opts) {
  require_well_formed(p);
  std::vector<ConstraintViolation> out;
  const cpp_int n = p.n;
  const cpp_int k = p.k;
  const cpp_int m = p.m();
  const cpp_int q = to_big(p.q());
  const cpp_int num = p.mu_prime_num;
  const cpp_int den = p.mu_prime_den;
  const cpp_int mu = p.mu;

  // (1) n = o(m), concretised as m >= n (2 + k).
  if (m < n * (2 + k)) {
    out.push_back({1, "m < n(2+k)"});
  }
  // (2) 0 < alpha < 1 with alpha = sqrt(m) mu' / q, i.e. m mu'^2 < q^2.
  if (num == 0 || m * num * num >= q * q * den * den) {
    out.push_back({2, "alpha not in (0, 1)"});
  }
  // (3) mu' = mu / m exactly.
  if (num * m != mu * den) {
    out.push_back({3, "mu' != mu / m"});
  }
  // (4) alpha' q >= 2 sqrt(n), alpha' q = mu' / sqrt(m): mu'^2 >= 4 n m.
  if (num * num < 4 * n * m * den * den) {
    out.push_back({4, "alpha' q < 2 sqrt(n)"});
  }

  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const Float50 fm = Float50(m);
  const Float50 fq = Float50(q);
  const Float50 fmu_prime = Float50(num) / Float50(den);
  // (5) n / alpha' = n sqrt(m) q / mu' <= n^c.
  if (num != 0) {
    Float50 ratio = Float50(n) * sqrt(fm) * fq / fmu_prime;
    Float50 bound_log = Float50(opts.poly_exponent) * log(Float50(n));
    if (p.n < 2 || log(ratio) > bound_log) {
      out.push_back({5, "n/alpha' exceeds n^" + std::to_string(opts.poly_exponent)});
    }
  } else {
    out.push_back({5, "alpha' is zero"});
  }
  // (6) sqrt(m) mu < r_max - mu' sqrt(m).
  Float50 lhs = sqrt(fm) * Float50(mu);
  Float50 rhs = r_max_exact(p) - fmu_prime * sqrt(fm);
  if (!(lhs < rhs)) {
    out.push_back({6, "sqrt(m) mu >= r_max - mu' sqrt(m)"});
  }
  return out;
}

void require_valid(const LweParams& p) {
  auto violations = check_constraints(p);
  if (violations.empty()) return;
  std::string msg = p.describe() + " violates:";
  for (const auto& v : violations) {
    msg += " (" + std::to_string(v.index) + ") " + v.detail + ";";
  }
  throw Error(ErrorCode::kInvalidParams, msg);
}

}  // namespace qfactory
