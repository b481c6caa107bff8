#include "qfactory/keyfile.hpp"

#include <algorithm>

namespace qfactory {

namespace {

constexpr std::uint8_t kMagic[4] = {'Q', 'F', 'M', 'P'};

void write_header(const LweParams& p, std::vector<std::uint8_t>& out) {
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u16(out, kKeyFileVersion);
  put_u64(out, p.n);
  put_u64(out, static_cast<std::uint64_t>(p.k));
  put_u64(out, p.m_bar());
  put_u64(out, p.omega());
  put_u64(out, p.mu);
}

LweParams read_header(ByteReader& r) {
  auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    throw Error(ErrorCode::kParse, "bad key file magic");
  }
  if (r.u16() != kKeyFileVersion) throw Error(ErrorCode::kParse, "unsupported key file version");
  LweParams p;
  p.n = r.u64();
  std::uint64_t k = r.u64();
  std::uint64_t m_bar = r.u64();
  std::uint64_t omega = r.u64();
  std::uint64_t mu = r.u64();
  if (k < 1 || k > static_cast<std::uint64_t>(Modulus::kMaxBits)) {
    throw Error(ErrorCode::kParse, "key file k out of range");
  }
  p.k = static_cast<int>(k);
  if (p.n == 0 || m_bar != 2 * p.n || omega != p.n * k) {
    throw Error(ErrorCode::kParse, "key file dimensions inconsistent");
  }
  p = p.with_mu(mu);
  require_well_formed(p);
  return p;
}

void expect_tag(ByteReader& r, char tag) {
  if (r.u8() != static_cast<std::uint8_t>(tag)) {
    throw Error(ErrorCode::kParse, std::string("expected key file section '") + tag + "'");
  }
}

}  // namespace

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<std::uint8_t> write_key(const Mp12Key& key) {
  std::vector<std::uint8_t> out;
  write_header(key.params, out);
  put_u8(out, 'A');
  serialize(key.a, out);
  return out;
}

std::vector<std::uint8_t> write_key(const Reg2Key& key) {
  std::vector<std::uint8_t> out = write_key(key.a);
  put_u8(out, 'b');
  serialize(key.b0, out);
  return out;
}

std::vector<std::uint8_t> write_trapdoor(const LweParams& params, const Mp12Trapdoor& td) {
  std::vector<std::uint8_t> out;
  write_header(params, out);
  put_u8(out, 'R');
  serialize(td.r, out);
  return out;
}

std::vector<std::uint8_t> write_trapdoor(const LweParams& params, const Reg2Trapdoor& td) {
  std::vector<std::uint8_t> out = write_trapdoor(params, td.r);
  put_u8(out, 's');
  serialize(td.s0, out);
  put_u8(out, 'e');
  serialize(td.e0, out);
  return out;
}

namespace {

Mp12Key read_mp12_section(ByteReader& r) {
  LweParams p = read_header(r);
  expect_tag(r, 'A');
  ZqMatrix a = r.zq_matrix(p.modulus());
  if (a.rows() != p.n || a.cols() != p.m()) {
    throw Error(ErrorCode::kParse, "key matrix has wrong shape");
  }
  return Mp12Key{std::move(a), p};
}

}  // namespace

Mp12Key read_mp12_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Mp12Key key = read_mp12_section(r);
  if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes in key file");
  return key;
}

Reg2Key read_reg2_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Mp12Key a = read_mp12_section(r);
  expect_tag(r, 'b');
  ZqVector b0 = r.zq_vector(a.params.modulus());
  if (b0.size() != a.params.m()) throw Error(ErrorCode::kParse, "b0 has wrong length");
  if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes in key file");
  return Reg2Key{std::move(a), std::move(b0)};
}

std::pair<LweParams, Reg2Trapdoor> read_reg2_trapdoor(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  LweParams p = read_header(r);
  expect_tag(r, 'R');
  SignedMatrix rm = r.signed_matrix();
  if (rm.rows != p.m_bar() || rm.cols != p.omega()) {
    throw Error(ErrorCode::kParse, "trapdoor matrix has wrong shape");
  }
  expect_tag(r, 's');
  ZqVector s0 = r.zq_vector(p.modulus());
  expect_tag(r, 'e');
  SignedVector e0 = r.signed_vector();
  if (s0.size() != p.n || e0.size() != p.m()) {
    throw Error(ErrorCode::kParse, "trapdoor key secret has wrong length");
  }
  if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes in trapdoor file");
  return {p, Reg2Trapdoor{Mp12Trapdoor{std::move(rm)}, std::move(s0), std::move(e0)}};
}

nlohmann::json to_json(const LweParams& p) {
  nlohmann::json j;
  j["n"] = p.n;
  j["k"] = p.k;
  j["q"] = u128_to_string(p.q());
  j["m_bar"] = p.m_bar();
  j["omega"] = p.omega();
  j["m"] = p.m();
  j["mu"] = p.mu;
  j["mu_prime"] = static_cast<double>(p.mu_prime());
  j["mu_prime_rational"] = {p.mu_prime_num, p.mu_prime_den};
  j["alpha"] = static_cast<double>(p.alpha());
  j["alpha_prime"] = static_cast<double>(p.alpha_prime());
  j["B"] = p.gadget_base;
  j["C"] = static_cast<double>(gaussian_constant());
  j["r_max"] = static_cast<double>(p.r_max());
  j["trapdoor_sigma"] = static_cast<double>(p.trapdoor_sigma());
  j["key_error_sigma"] = static_cast<double>(p.key_error_sigma());
  j["domain_bits"] = p.domain_bits();
  return j;
}

namespace {

nlohmann::json matrix_json(const ZqMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(u128_to_string(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_json(const ZqVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (auto x : v.values()) out.push_back(u128_to_string(x));
  return out;
}

}  // namespace

nlohmann::json to_json(const Reg2Key& key) {
  nlohmann::json j;
  j["params"] = to_json(key.a.params);
  j["A"] = matrix_json(key.a.a);
  j["b0"] = vector_json(key.b0);
  return j;
}

nlohmann::json to_json(const Reg2Trapdoor& td) {
  nlohmann::json j;
  nlohmann::json r = nlohmann::json::array();
  for (std::size_t i = 0; i < td.r.r.rows; ++i) {
    r.push_back(std::vector<std::int64_t>(td.r.r.entries.begin() + i * td.r.r.cols,
                                          td.r.r.entries.begin() + (i + 1) * td.r.r.cols));
  }
  j["R"] = std::move(r);
  j["s0"] = vector_json(td.s0);
  j["e0"] = td.e0.entries;
  return j;
}

}  // namespace qfactory
