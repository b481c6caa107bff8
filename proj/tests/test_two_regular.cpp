#include <map>
#include <set>

#include <gtest/gtest.h>

#include "qfactory/codec.hpp"
#include "qfactory/family.hpp"
#include "qfactory/two_regular.hpp"

using namespace qfactory;

namespace {

BitString to_bits(std::uint32_t x, int dim, int c) {
  BitString b(static_cast<std::size_t>(dim) + 1);
  for (int i = 0; i < dim; ++i) b[i] = (x >> i) & 1;
  b[dim] = static_cast<std::uint8_t>(c);
  return b;
}

// Brute-force preimage table of a tagged two-regular function.
template <class F>
std::map<typename F::Range, std::vector<typename F::Input>> preimage_table(const typename F::Index& k,
                                                                           int dim) {
  std::map<typename F::Range, std::vector<typename F::Input>> table;
  for (std::uint32_t x = 0; x < (1u << dim); ++x) {
    for (int c = 0; c < 2; ++c) table[F::eval(k, {x, c})].push_back({x, c});
  }
  return table;
}

}  // namespace

TEST(ToyLinear, LinearAndInvertible) {
  Rng rng(300);
  for (int dim = 1; dim <= 10; ++dim) {
    auto [k, t] = ToyLinear::gen(dim, rng);
    EXPECT_EQ(ToyLinear::eval(k, 0), 0u);
    std::set<std::uint32_t> images;
    for (std::uint32_t a = 0; a < (1u << dim); ++a) {
      images.insert(ToyLinear::eval(k, a));
      ASSERT_EQ(ToyLinear::invert(k, t, ToyLinear::eval(k, a)), a);
    }
    EXPECT_EQ(images.size(), std::size_t{1} << dim);
  }
}

TEST(ToyLinear, HomomorphicExhaustively) {
  Rng rng(301);
  for (int dim = 1; dim <= 10; ++dim) {
    auto [k, t] = ToyLinear::gen(dim, rng);
    for (std::uint32_t a = 0; a < (1u << dim); ++a) {
      for (std::uint32_t b = 0; b < (1u << dim); ++b) {
        ASSERT_EQ(ToyLinear::eval(k, a ^ b), ToyLinear::eval(k, a) ^ ToyLinear::eval(k, b));
      }
    }
  }
}

TEST(ToyLinear, RejectsOversizeDimension) {
  Rng rng(302);
  EXPECT_THROW(ToyLinear::gen(ToyLinear::kMaxDim + 1, rng), Error);
  EXPECT_THROW(ToyLinear::gen(0, rng), Error);
}

TEST(FromInj, ZeroShiftIsRejected) {
  Rng rng(303);
  auto [k, t] = ToyLinear::gen(5, rng);
  EXPECT_THROW(ToyLinearTwoRegular::gen_with_x0(k, t, 0), Error);
  EXPECT_NO_THROW(ToyLinearTwoRegular::gen_with_x0(k, t, 1));
}

TEST(FromInj, BruteForceClawsMatchInversion) {
  Rng rng(304);
  for (int dim = 1; dim <= 10; ++dim) {
    auto [base_k, base_t] = ToyLinear::gen(dim, rng);
    auto [k, t] = ToyLinearTwoRegular::gen(base_k, base_t, rng);
    auto table = preimage_table<ToyLinearTwoRegular>(k, dim);
    EXPECT_EQ(table.size(), std::size_t{1} << dim);
    for (const auto& [y, pre] : table) {
      ASSERT_EQ(pre.size(), 2u);
      ASSERT_NE(pre[0].c, pre[1].c);
      const auto& zero = pre[0].c == 0 ? pre[0] : pre[1];
      const auto& one = pre[0].c == 0 ? pre[1] : pre[0];
      EXPECT_EQ(zero.x ^ one.x, t.x0);
      auto inv = ToyLinearTwoRegular::inv(k, t, y);
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(inv->first, zero);
      EXPECT_EQ(inv->second, one);
    }
  }
}

TEST(ToyPermutation, IdentityAndRoundTrip) {
  auto [ik, it] = ToyPermutation::identity_permutation(6);
  for (std::uint32_t x = 0; x < 64; ++x) EXPECT_EQ(ToyPermutation::eval(ik, x), x);

  Rng rng(305);
  auto [k, t] = ToyPermutation::gen(12, rng);
  for (int i = 0; i < 1000; ++i) {
    auto x = ToyPermutation::sample_domain(k, rng);
    ASSERT_EQ(ToyPermutation::invert(k, t, ToyPermutation::eval(k, x)), x);
  }
  EXPECT_FALSE(ToyPermutation::invert(k, t, 1u << 12).has_value());
}

TEST(ToyPermutation, IsAPermutation) {
  Rng rng(306);
  auto [k, t] = ToyPermutation::gen(10, rng);
  std::set<std::uint32_t> seen(k.table.begin(), k.table.end());
  EXPECT_EQ(seen.size(), 1024u);
  EXPECT_EQ(*seen.rbegin(), 1023u);
}

TEST(FromBij, EveryImageHasTwoPreimagesExhaustively) {
  Rng rng(307);
  for (int dim = 1; dim <= 10; ++dim) {
    auto k1 = ToyPermutation::gen(dim, rng);
    auto k2 = ToyPermutation::gen(dim, rng);
    auto [k, t] = ToyPermTwoRegular::gen_from(k1, k2);
    auto table = preimage_table<ToyPermTwoRegular>(k, dim);
    EXPECT_EQ(table.size(), std::size_t{1} << dim);
    for (const auto& [y, pre] : table) {
      ASSERT_EQ(pre.size(), 2u);
      ASSERT_NE(pre[0].c, pre[1].c);
      auto inv = ToyPermTwoRegular::inv(k, t, y);
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(ToyPermTwoRegular::eval(k, inv->first), y);
      EXPECT_EQ(ToyPermTwoRegular::eval(k, inv->second), y);
      EXPECT_EQ(inv->first.c, 0);
      EXPECT_EQ(inv->second.c, 1);
    }
  }
}

TEST(FromBij, SameKeysShareTheInput) {
  Rng rng(308);
  auto g = ToyPermutation::gen(8, rng);
  auto [k, t] = ToyPermTwoRegular::gen_from(g, g);
  for (std::uint32_t y = 0; y < 256; ++y) {
    auto inv = ToyPermTwoRegular::inv(k, t, y);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(inv->first.x, inv->second.x);
  }
}

// Shared conformance checks for every registered runtime family.
class FamilyConformance : public ::testing::TestWithParam<std::tuple<FamilyId, int>> {};

TEST_P(FamilyConformance, TwoRegularAndInvertible) {
  auto [id, n] = GetParam();
  FamilyConfig cfg{.id = id, .n = static_cast<std::uint64_t>(n)};
  Rng rng(309 + n);
  KeyPair keys = generate_keys(cfg, rng);
  const PublicFunction& f = *keys.pub;
  ASSERT_EQ(f.domain_bits(), static_cast<std::size_t>(n));
  EXPECT_EQ(f.family(), id);
  EXPECT_EQ(f.descriptor(), cfg.descriptor());

  std::map<Bytes, std::vector<BitString>> table;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    BitString x = to_bits(v & ((1u << (n - 1)) - 1), n - 1, static_cast<int>(v >> (n - 1)));
    table[f.eval(x)].push_back(x);
  }
  EXPECT_EQ(table.size(), std::size_t{1} << (n - 1));
  for (const auto& [y, pre] : table) {
    ASSERT_EQ(pre.size(), 2u);
    ASSERT_NE(pre[0].back(), pre[1].back());
    ClawResult r = keys.secret->invert(y);
    auto claw = std::get_if<Claw>(&r);
    ASSERT_NE(claw, nullptr);
    EXPECT_EQ(claw->x.back(), 0);
    EXPECT_EQ(claw->xp.back(), 1);
    std::set<BitString> expect(pre.begin(), pre.end());
    EXPECT_EQ((std::set<BitString>{claw->x, claw->xp}), expect);
    EXPECT_EQ(f.enumerate_preimages(y).size(), 2u);
  }
}

TEST_P(FamilyConformance, SerializedPublicFunctionBehavesIdentically) {
  auto [id, n] = GetParam();
  FamilyConfig cfg{.id = id, .n = static_cast<std::uint64_t>(n)};
  Rng rng(400 + n);
  KeyPair keys = generate_keys(cfg, rng);
  Bytes bytes = keys.pub->serialize();
  auto loaded = load_public_function(id, bytes);
  EXPECT_EQ(loaded->serialize(), bytes);
  for (int i = 0; i < 100; ++i) {
    BitString x = keys.pub->sample_domain(rng);
    ASSERT_EQ(loaded->eval(x), keys.pub->eval(x));
  }
}

INSTANTIATE_TEST_SUITE_P(Toys, FamilyConformance,
                         ::testing::Combine(::testing::Values(FamilyId::kToyLinear,
                                                              FamilyId::kToyPerm),
                                            ::testing::Range(2, 12)));

TEST(RuntimeFamily, NamesAndFlags) {
  for (auto id : {FamilyId::kReg2, FamilyId::kToyLinear, FamilyId::kToyPerm}) {
    EXPECT_EQ(parse_family(family_name(id)), id);
    EXPECT_EQ(family_from_byte(static_cast<std::uint8_t>(id)), id);
  }
  EXPECT_THROW(parse_family("rsa"), Error);
  EXPECT_FALSE(family_from_byte(0).has_value());
  EXPECT_FALSE(family_from_byte(4).has_value());
  EXPECT_TRUE(is_insecure_toy(FamilyId::kToyLinear));
  EXPECT_TRUE(is_insecure_toy(FamilyId::kToyPerm));
  EXPECT_FALSE(is_insecure_toy(FamilyId::kReg2));
}

TEST(RuntimeFamily, SizeLimits) {
  EXPECT_NO_THROW((FamilyConfig{.id = FamilyId::kToyLinear, .n = 24}.validate()));
  EXPECT_THROW((FamilyConfig{.id = FamilyId::kToyLinear, .n = 25}.validate()), Error);
  EXPECT_NO_THROW((FamilyConfig{.id = FamilyId::kToyPerm, .n = 20}.validate()));
  EXPECT_THROW((FamilyConfig{.id = FamilyId::kToyPerm, .n = 21}.validate()), Error);
  EXPECT_THROW((FamilyConfig{.id = FamilyId::kToyPerm, .n = 1}.validate()), Error);
}

TEST(RuntimeFamily, DescriptorsAndDigests) {
  FamilyConfig toy{.id = FamilyId::kToyLinear, .n = 6};
  EXPECT_EQ(toy.descriptor(), "toy-linear;n=6");
  EXPECT_EQ(toy.digest(), sha256(std::string("toy-linear;n=6")));
  FamilyConfig reg{.id = FamilyId::kReg2, .n = 8};
  EXPECT_EQ(reg.descriptor(), "reg2;n=8;k=36;mu=29984;mu_prime=29984/304");
  EXPECT_NE(reg.digest(), toy.digest());
}

TEST(RuntimeFamily, SameKeysHookGivesClawsDifferingOnlyInTag) {
  FamilyConfig cfg{.id = FamilyId::kToyPerm, .n = 7, .toy_perm_same_keys = true};
  Rng rng(500);
  KeyPair keys = generate_keys(cfg, rng);
  for (int i = 0; i < 50; ++i) {
    auto y = keys.pub->eval(keys.pub->sample_domain(rng));
    auto claw = std::get<Claw>(keys.secret->invert(y));
    EXPECT_TRUE(std::equal(claw.x.begin(), claw.x.end() - 1, claw.xp.begin()));
  }
}

TEST(RuntimeFamily, MalformedImagesAndKeys) {
  FamilyConfig cfg{.id = FamilyId::kToyLinear, .n = 5};
  Rng rng(501);
  KeyPair keys = generate_keys(cfg, rng);
  EXPECT_TRUE(std::holds_alternative<InversionFailure>(keys.secret->invert(Bytes{1, 2})));
  EXPECT_TRUE(std::holds_alternative<InversionFailure>(keys.secret->invert(Bytes{0, 0, 0, 1})));

  Bytes bytes = keys.pub->serialize();
  auto expect_parse = [](FamilyId id, const Bytes& b) {
    try {
      load_public_function(id, b);
      ADD_FAILURE() << "accepted malformed public key";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
  };
  expect_parse(FamilyId::kToyPerm, bytes);
  expect_parse(FamilyId::kToyLinear, Bytes(bytes.begin(), bytes.end() - 1));
  Bytes trailing = bytes;
  trailing.push_back(0);
  expect_parse(FamilyId::kToyLinear, trailing);

  FamilyConfig perm{.id = FamilyId::kToyPerm, .n = 4};
  Bytes pb = generate_keys(perm, rng).pub->serialize();
  // Duplicate a table entry so it is no longer a permutation.
  pb[9] = pb[13];
  pb[10] = pb[14];
  pb[11] = pb[15];
  pb[12] = pb[16];
  expect_parse(FamilyId::kToyPerm, pb);
}

TEST(RuntimeFamily, EvalRejectsWrongLength) {
  FamilyConfig cfg{.id = FamilyId::kToyLinear, .n = 5};
  Rng rng(502);
  KeyPair keys = generate_keys(cfg, rng);
  EXPECT_THROW(keys.pub->eval(BitString(4)), Error);
}

TEST(RuntimeFamily, Reg2KeysInvertTheirOwnImages) {
  FamilyConfig cfg{.id = FamilyId::kReg2, .n = 4};
  Rng rng(503);
  KeyPair keys = generate_keys(cfg, rng);
  EXPECT_EQ(keys.pub->domain_bits(), gen_params(4).domain_bits());
  EXPECT_THROW(keys.pub->enumerate_preimages(Bytes{}), Error);
  int claws = 0;
  for (int i = 0; i < 20; ++i) {
    BitString x = keys.pub->sample_domain(rng);
    Bytes y = keys.pub->eval(x);
    auto r = keys.secret->invert(y);
    if (auto* c = std::get_if<Claw>(&r)) {
      ++claws;
      EXPECT_EQ(keys.pub->eval(c->x), y);
      EXPECT_EQ(keys.pub->eval(c->xp), y);
      EXPECT_TRUE(c->x == x || c->xp == x);
    } else {
      EXPECT_EQ(std::get<SinglePreimage>(r).x, x);
    }
  }
  EXPECT_GT(claws, 10);
  auto loaded = load_public_function(FamilyId::kReg2, keys.pub->serialize());
  EXPECT_EQ(loaded->descriptor(), cfg.descriptor());
}
