#include "qfactory/hardcore.hpp"

#include <functional>
#include <sstream>

#include "qfactory/error.hpp"
#include "qfactory/rng.hpp"

namespace qfactory {

std::int64_t emod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

namespace {

void split_alphas(const std::vector<int>& alphas, std::size_t count, HardcoreInputs& in) {
  in.alpha1.resize(count);
  in.alpha2.resize(count);
  in.alpha3.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    int a = alphas[i];
    if (a < 0 || a > 7) throw Error(ErrorCode::kInvalidArgument, "alpha must be in 0..7");
    in.alpha1[i] = static_cast<std::uint8_t>((a >> 2) & 1);
    in.alpha2[i] = static_cast<std::uint8_t>((a >> 1) & 1);
    in.alpha3[i] = static_cast<std::uint8_t>(a & 1);
  }
}

int inner_mod2(const BitString& u, const BitString& v) {
  int acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc ^= u[i] & v[i];
  return acc;
}

std::int64_t inner(const std::vector<int>& z, const BitString& v) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += z[i] * static_cast<std::int64_t>(v[i]);
  return acc;
}

}  // namespace

HardcoreInputs HardcoreInputs::from_claw(const BitString& x, const BitString& xp,
                                         const std::vector<int>& alphas, const BitString& b,
                                         std::optional<std::size_t> terms) {
  if (x.size() != xp.size() || x.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "claw halves differ in length");
  }
  const std::size_t count = terms.value_or(x.size() - 1);
  if (count > x.size() || alphas.size() < count || b.size() < count) {
    throw Error(ErrorCode::kDimensionMismatch, "not enough alphas or outcomes for the term count");
  }
  HardcoreInputs in;
  in.z.resize(count);
  in.x_tilde.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    in.z[i] = static_cast<int>(x[i]) - static_cast<int>(xp[i]);
    in.x_tilde[i] = static_cast<std::uint8_t>(x[i] ^ xp[i]);
  }
  split_alphas(alphas, count, in);
  in.b.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(count));
  in.validate();
  return in;
}

HardcoreInputs HardcoreInputs::from_vectors(const std::vector<int>& z, const std::vector<int>& alphas,
                                            const BitString& b) {
  if (alphas.size() != z.size() || b.size() != z.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "z, alpha and b must have equal length");
  }
  HardcoreInputs in;
  in.z = z;
  in.x_tilde.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) in.x_tilde[i] = static_cast<std::uint8_t>(z[i] != 0);
  split_alphas(alphas, z.size(), in);
  in.b = b;
  in.validate();
  return in;
}

void HardcoreInputs::validate() const {
  const std::size_t n = z.size();
  if (x_tilde.size() != n || alpha1.size() != n || alpha2.size() != n || alpha3.size() != n ||
      b.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "hard-core inputs have inconsistent lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] < -1 || z[i] > 1) throw Error(ErrorCode::kInvalidArgument, "z_i must be in {-1, 0, 1}");
    if ((z[i] != 0) != (x_tilde[i] == 1) || x_tilde[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument, "|z_i| must equal x_tilde_i");
    }
    if (alpha1[i] > 1 || alpha2[i] > 1 || alpha3[i] > 1 || b[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument, "bit planes must hold bits");
    }
  }
}

HardcoreSums hardcore_sums(const HardcoreInputs& in) {
  return HardcoreSums{inner(in.z, in.b), inner(in.z, in.alpha1), inner(in.z, in.alpha2),
                      inner(in.z, in.alpha3)};
}

std::array<int, 3> hardcore_bits(const HardcoreInputs& in) {
  const HardcoreSums s = hardcore_sums(in);
  const int b3 = inner_mod2(in.x_tilde, in.alpha3);
  const auto h2 = static_cast<int>((emod(s.s3, 4) - emod(s.s3, 2)) / 2);
  const int b2 = inner_mod2(in.x_tilde, in.alpha2) ^ h2;
  const std::int64_t t = s.s2 + (s.s3 - emod(s.s3, 2)) / 2;
  const auto h1 = static_cast<int>(emod(s.s0, 2) ^ emod((t - emod(t, 2)) / 2, 2));
  const int b1 = inner_mod2(in.x_tilde, in.alpha1) ^ h1;
  return {b1, b2, b3};
}

int hardcore_direct(const HardcoreInputs& in) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < in.z.size(); ++i) {
    const int alpha = 4 * in.alpha1[i] + 2 * in.alpha2[i] + in.alpha3[i];
    acc += in.z[i] * (4 * static_cast<std::int64_t>(in.b[i]) + alpha);
  }
  return static_cast<int>(emod(acc, 8));
}

namespace {

using Check = std::function<bool(std::int64_t, std::int64_t, std::int64_t, std::int64_t)>;

const std::array<std::pair<const char*, Check>, 7>& identities() {
  static const std::array<std::pair<const char*, Check>, 7> table = {{
      {"I1", [](auto a, auto b, auto, auto) { return emod(a + b, 8) == emod(emod(a, 8) + emod(b, 8), 8); }},
      {"I2", [](auto a, auto b, auto, auto) { return emod(emod(a + b, 8), 4) == emod(emod(a, 4) + emod(b, 4), 4); }},
      {"I3", [](auto a, auto b, auto, auto) { return emod(emod(a + b, 4), 2) == emod(emod(a, 2) + emod(b, 2), 2); }},
      {"I4", [](auto a, auto, auto, auto) { return emod(2 * a, 4) == 2 * emod(a, 2); }},
      {"I5", [](auto a, auto, auto, auto) { return emod(2 * a, 8) == 2 * emod(a, 4); }},
      {"I6", [](auto, auto, auto d, auto e) { return emod(2 * d + e, 4) - emod(e, 2) == emod(2 * d + e - emod(e, 2), 4); }},
      {"I7", [](auto, auto, auto d, auto e) { return emod(2 * d + e, 8) - emod(e, 2) == emod(2 * d + e - emod(e, 2), 8); }},
  }};
  return table;
}

void record_decomposition(const HardcoreInputs& in, IdentityReport& report) {
  ++report.decomposition_checks;
  auto bits = hardcore_bits(in);
  int packed = 4 * bits[0] + 2 * bits[1] + bits[2];
  int direct = hardcore_direct(in);
  if (packed != direct && report.counterexamples.size() < 50) {
    std::ostringstream os;
    os << "decomposition n=" << in.z.size() << " z=[";
    for (auto v : in.z) os << v << ' ';
    os << "] formula=" << packed << " direct=" << direct;
    report.counterexamples.push_back(os.str());
  }
}

void exhaustive(std::size_t n, IdentityReport& report) {
  HardcoreInputs in;
  in.z.assign(n, 0);
  in.x_tilde.assign(n, 0);
  in.alpha1.assign(n, 0);
  in.alpha2.assign(n, 0);
  in.alpha3.assign(n, 0);
  in.b.assign(n, 0);
  std::uint64_t z_count = 1, a_count = std::uint64_t{1} << (3 * n), b_count = std::uint64_t{1} << n;
  for (std::size_t i = 0; i < n; ++i) z_count *= 3;
  for (std::uint64_t zc = 0; zc < z_count; ++zc) {
    std::uint64_t v = zc;
    for (std::size_t i = 0; i < n; ++i, v /= 3) {
      in.z[i] = static_cast<int>(v % 3) - 1;
      in.x_tilde[i] = static_cast<std::uint8_t>(in.z[i] != 0);
    }
    for (std::uint64_t ac = 0; ac < a_count; ++ac) {
      for (std::size_t i = 0; i < n; ++i) {
        auto a = (ac >> (3 * i)) & 7u;
        in.alpha1[i] = static_cast<std::uint8_t>((a >> 2) & 1);
        in.alpha2[i] = static_cast<std::uint8_t>((a >> 1) & 1);
        in.alpha3[i] = static_cast<std::uint8_t>(a & 1);
      }
      for (std::uint64_t bc = 0; bc < b_count; ++bc) {
        for (std::size_t i = 0; i < n; ++i) in.b[i] = static_cast<std::uint8_t>((bc >> i) & 1u);
        record_decomposition(in, report);
      }
    }
  }
}

}  // namespace

IdentityReport verify_identities(std::uint64_t trials, std::uint64_t seed) {
  IdentityReport report;
  Rng rng(seed);
  const std::int64_t bound = std::int64_t{1} << 40;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int sign = 0; sign < 2; ++sign) {
      const std::int64_t lo = sign == 0 ? 0 : -bound;
      std::int64_t a = rng.uniform_int(lo, bound), b = rng.uniform_int(lo, bound);
      std::int64_t d = rng.uniform_int(lo, bound), e = rng.uniform_int(lo, bound);
      for (const auto& [name, check] : identities()) {
        ++report.identity_checks;
        if (!check(a, b, d, e) && report.counterexamples.size() < 50) {
          std::ostringstream os;
          os << name << " a=" << a << " b=" << b << " d=" << d << " e=" << e;
          report.counterexamples.push_back(os.str());
        }
      }
    }
  }
  return report;
}

IdentityReport verify_decomposition(std::uint64_t trials, std::size_t n_max, std::uint64_t seed,
                                    std::size_t exhaustive_n) {
  if (n_max < 1) throw Error(ErrorCode::kInvalidArgument, "n_max must be at least 1");
  IdentityReport report;
  for (std::size_t n = 1; n <= exhaustive_n; ++n) exhaustive(n, report);
  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n_max)));
    std::vector<int> z(n), alphas(n);
    BitString b(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = static_cast<int>(rng.uniform_int(-1, 1));
      alphas[i] = static_cast<int>(rng.uniform_int(0, 7));
      b[i] = static_cast<std::uint8_t>(rng.bit());
    }
    record_decomposition(HardcoreInputs::from_vectors(z, alphas, b), report);

    // Claw form, with both summation lengths.
    BitString x(n + 1), xp(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      x[i] = static_cast<std::uint8_t>(rng.bit());
      xp[i] = static_cast<std::uint8_t>(rng.bit());
    }
    alphas.push_back(static_cast<int>(rng.uniform_int(0, 7)));
    b.push_back(static_cast<std::uint8_t>(rng.bit()));
    record_decomposition(HardcoreInputs::from_claw(x, xp, alphas, b), report);
    record_decomposition(HardcoreInputs::from_claw(x, xp, alphas, b, n + 1), report);
  }
  return report;
}

IdentityReport verify_identity_suite(std::uint64_t trials, std::size_t n_max, std::uint64_t seed) {
  IdentityReport a = verify_identities(trials, seed);
  IdentityReport b = verify_decomposition(trials, n_max, derive_seed(seed, 1));
  a.decomposition_checks = b.decomposition_checks;
  a.counterexamples.insert(a.counterexamples.end(), b.counterexamples.begin(), b.counterexamples.end());
  return a;
}

}  // namespace qfactory
