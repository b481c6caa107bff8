#include <cmath>

#include <gtest/gtest.h>

#include "qfactory/gadget.hpp"
#include "qfactory/keyfile.hpp"
#include "qfactory/mp12.hpp"
#include "qfactory/params.hpp"

using namespace qfactory;

namespace {

class Mp12Test : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Rng rng(100);
    auto [key, td] = lwe_gen(gen_params(8), rng);
    key_ = new Mp12Key(std::move(key));
    td_ = new Mp12Trapdoor(std::move(td));
  }
  static void TearDownTestSuite() {
    delete key_;
    delete td_;
  }
  static Mp12Key* key_;
  static Mp12Trapdoor* td_;
};
Mp12Key* Mp12Test::key_ = nullptr;
Mp12Trapdoor* Mp12Test::td_ = nullptr;

SignedVector zeros(std::size_t m) { return SignedVector{std::vector<std::int64_t>(m, 0)}; }

}  // namespace

TEST_F(Mp12Test, Dimensions) {
  const LweParams& p = key_->params;
  EXPECT_EQ(key_->a.rows(), 8u);
  EXPECT_EQ(key_->a.cols(), 2u * 8 + 8u * 36);
  EXPECT_EQ(td_->r.rows, 16u);
  EXPECT_EQ(td_->r.cols, 288u);
  EXPECT_EQ(p.m(), 304u);
}

TEST_F(Mp12Test, SecondBlockIsGadgetMinusARTimesR) {
  EXPECT_TRUE(key_matches_trapdoor(*key_, *td_));
  const LweParams& p = key_->params;
  ZqMatrix a1 = key_->a.column_block(0, p.m_bar());
  ZqMatrix a2 = key_->a.column_block(p.m_bar(), p.omega());
  ZqMatrix expect = gadget_matrix(p.n, p.k) - zq_matmul(a1, td_->r.embed(p.modulus()));
  EXPECT_EQ(a2, expect);

  Mp12Trapdoor other = *td_;
  other.r.entries[0] += 1;
  EXPECT_FALSE(key_matches_trapdoor(*key_, other));
}

TEST_F(Mp12Test, TrapdoorIsCenteredGaussianOfExpectedWidth) {
  const auto& r = td_->r.entries;
  long double sum = 0, sq = 0;
  for (auto x : r) {
    sum += x;
    sq += static_cast<long double>(x) * x;
  }
  const double mean = static_cast<double>(sum / r.size());
  const double sd = std::sqrt(static_cast<double>(sq / r.size()) - mean * mean);
  const double sigma = static_cast<double>(key_->params.trapdoor_sigma());
  EXPECT_LT(std::fabs(mean), 5 * sigma / std::sqrt(static_cast<double>(r.size())));
  EXPECT_NEAR(sd, sigma, 0.05 * sigma);
}

TEST(Mp12, ZeroTrapdoorHookGivesGadget) {
  LweParams p = gen_params(4);
  Rng rng(101);
  auto [key, td] = lwe_gen(p, rng, LweGenOptions{.zero_trapdoor = true});
  EXPECT_EQ(key.a.column_block(p.m_bar(), p.omega()), gadget_matrix(p.n, p.k));
  for (auto x : td.r.entries) EXPECT_EQ(x, 0);
}

TEST(Mp12, GenIsDeterministic) {
  LweParams p = gen_params(4);
  Rng a(7), b(7);
  auto k1 = lwe_gen(p, a);
  auto k2 = lwe_gen(p, b);
  EXPECT_EQ(k1.first.a, k2.first.a);
  EXPECT_EQ(k1.second.r, k2.second.r);
}

TEST(Mp12, GenRejectsInvalidParams) {
  LweParams p = gen_params(8).with_mu(gen_params(8).mu * 1'000'000);
  Rng rng(1);
  EXPECT_THROW(lwe_gen(p, rng), Error);
}

TEST_F(Mp12Test, EvalOfZeroIsZero) {
  const LweParams& p = key_->params;
  ZqVector y = lwe_eval(*key_, ZqVector(p.n, p.modulus()), zeros(p.m()));
  EXPECT_EQ(y, ZqVector(p.m(), p.modulus()));
}

TEST_F(Mp12Test, NoiselessEvalMatchesMatmul) {
  const LweParams& p = key_->params;
  Rng rng(102);
  ZqVector s = sample_uniform_vector(p.n, p.modulus(), rng);
  ZqMatrix row(1, p.n, p.modulus());
  for (std::size_t i = 0; i < p.n; ++i) row.set(0, i, s[i]);
  ZqMatrix expect = zq_matmul(row, key_->a);
  ZqVector got = lwe_eval(*key_, s, zeros(p.m()));
  for (std::size_t j = 0; j < p.m(); ++j) ASSERT_EQ(got[j], expect.at(0, j));
}

TEST_F(Mp12Test, EvalRejectsOutOfBoxError) {
  const LweParams& p = key_->params;
  SignedVector e = zeros(p.m());
  e.entries[10] = -static_cast<std::int64_t>(p.mu) - 1;
  try {
    lwe_eval(*key_, ZqVector(p.n, p.modulus()), e);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kNormViolation);
  }
}

TEST_F(Mp12Test, Additivity) {
  const LweParams& p = key_->params;
  Rng rng(103);
  const auto half = static_cast<std::int64_t>(p.mu / 2);
  for (int t = 0; t < 20; ++t) {
    ZqVector s1 = sample_uniform_vector(p.n, p.modulus(), rng);
    ZqVector s2 = sample_uniform_vector(p.n, p.modulus(), rng);
    SignedVector e1 = sample_bounded_vector(p.m(), half, rng);
    SignedVector e2 = sample_bounded_vector(p.m(), half, rng);
    EXPECT_EQ(lwe_eval(*key_, s1, e1) + lwe_eval(*key_, s2, e2), lwe_eval(*key_, s1 + s2, e1 + e2));
  }
}

TEST_F(Mp12Test, NoiselessInversion) {
  const LweParams& p = key_->params;
  Rng rng(104);
  ZqVector s = sample_uniform_vector(p.n, p.modulus(), rng);
  auto got = lwe_inv(*key_, *td_, lwe_eval(*key_, s, zeros(p.m())));
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->s, s);
  EXPECT_EQ(got->e, zeros(p.m()));
}

TEST_F(Mp12Test, RoundTripOverTheLegalDomain) {
  const LweParams& p = key_->params;
  Rng rng(105);
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    ZqVector s = sample_uniform_vector(p.n, p.modulus(), rng);
    SignedVector e = sample_bounded_vector(p.m(), static_cast<std::int64_t>(p.mu), rng);
    auto got = lwe_inv(*key_, *td_, lwe_eval(*key_, s, e));
    if (got && got->s == s && got->e == e) ++ok;
  }
  EXPECT_EQ(ok, 1000);
}

TEST_F(Mp12Test, InversionIsDeterministic) {
  const LweParams& p = key_->params;
  Rng rng(106);
  ZqVector s = sample_uniform_vector(p.n, p.modulus(), rng);
  SignedVector e = sample_bounded_vector(p.m(), static_cast<std::int64_t>(p.mu), rng);
  ZqVector b = lwe_eval(*key_, s, e);
  auto a1 = lwe_inv(*key_, *td_, b);
  auto a2 = lwe_inv(*key_, *td_, b);
  ASSERT_TRUE(a1 && a2);
  EXPECT_EQ(a1->s, a2->s);
  EXPECT_EQ(a1->e, a2->e);
}

TEST_F(Mp12Test, ErrorBeyondRadiusFails) {
  const LweParams& p = key_->params;
  Rng rng(107);
  ZqVector s = sample_uniform_vector(p.n, p.modulus(), rng);
  SignedVector e = zeros(p.m());
  e.entries[0] = static_cast<std::int64_t>(p.q() / 2);
  EXPECT_FALSE(lwe_inv(*key_, *td_, lwe_eval_unchecked(*key_, s, e)).has_value());
}

TEST_F(Mp12Test, UniformTargetsNeverYieldLargeErrors) {
  const LweParams& p = key_->params;
  Rng rng(108);
  for (int t = 0; t < 20; ++t) {
    ZqVector b = sample_uniform_vector(p.m(), p.modulus(), rng);
    auto got = lwe_inv(*key_, *td_, b);
    if (got) {
      EXPECT_LE(got->e.l2_norm(), p.r_max());
      EXPECT_EQ(lwe_eval_unchecked(*key_, got->s, got->e), b);
    }
  }
}

TEST_F(Mp12Test, InvRejectsWrongLength) {
  EXPECT_THROW(lwe_inv(*key_, *td_, ZqVector(5, key_->params.modulus())), Error);
}

TEST_F(Mp12Test, KeyFileRoundTrip) {
  auto bytes = write_key(*key_);
  Mp12Key back = read_mp12_key(bytes);
  EXPECT_EQ(back.a, key_->a);
  EXPECT_EQ(back.params, key_->params);
  ASSERT_GE(bytes.size(), 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "QFMP");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
}

TEST_F(Mp12Test, KeyFileParseErrors) {
  auto good = write_key(*key_);
  auto expect_parse = [](std::vector<std::uint8_t> b) {
    try {
      read_mp12_key(b);
      ADD_FAILURE() << "accepted malformed key file";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
  };
  auto bad_magic = good;
  bad_magic[0] = 'X';
  expect_parse(bad_magic);
  auto bad_version = good;
  bad_version[4] = 9;
  expect_parse(bad_version);
  expect_parse(std::vector<std::uint8_t>(good.begin(), good.begin() + good.size() / 2));
  auto trailing = good;
  trailing.push_back(0);
  expect_parse(trailing);
  expect_parse({});
}

TEST_F(Mp12Test, TrapdoorFileIsNotAKey) {
  auto td_bytes = write_trapdoor(key_->params, *td_);
  EXPECT_THROW(read_mp12_key(td_bytes), Error);
}

TEST_F(Mp12Test, JsonDumpHasParameters) {
  auto j = to_json(key_->params);
  EXPECT_EQ(j.at("n").get<std::uint64_t>(), 8u);
  EXPECT_EQ(j.at("k").get<int>(), 36);
  EXPECT_EQ(u128_to_string(u128{1} << 100), "1267650600228229401496703205376");
  EXPECT_EQ(u128_to_string(0), "0");
}
