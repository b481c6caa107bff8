#include "qfactory/family.hpp"

#include <algorithm>

#include "qfactory/codec.hpp"
#include "qfactory/encoding.hpp"
#include "qfactory/keyfile.hpp"
#include "qfactory/two_regular.hpp"

namespace qfactory {

std::string family_name(FamilyId id) {
  switch (id) {
    case FamilyId::kReg2: return "reg2";
    case FamilyId::kToyLinear: return "toy-linear";
    case FamilyId::kToyPerm: return "toy-perm";
  }
  return "unknown";
}

FamilyId parse_family(const std::string& name) {
  if (name == "reg2") return FamilyId::kReg2;
  if (name == "toy-linear") return FamilyId::kToyLinear;
  if (name == "toy-perm") return FamilyId::kToyPerm;
  throw Error(ErrorCode::kInvalidArgument, "unknown family '" + name + "'");
}

std::optional<FamilyId> family_from_byte(std::uint8_t b) {
  if (b >= 1 && b <= 3) return static_cast<FamilyId>(b);
  return std::nullopt;
}

bool is_insecure_toy(FamilyId id) { return id != FamilyId::kReg2; }

namespace {

std::string reg2_descriptor(const LweParams& p) {
  return "reg2;n=" + std::to_string(p.n) + ";k=" + std::to_string(p.k) +
         ";mu=" + std::to_string(p.mu) + ";mu_prime=" + std::to_string(p.mu_prime_num) + "/" +
         std::to_string(p.mu_prime_den);
}

std::string toy_descriptor(FamilyId id, std::uint64_t n) {
  return family_name(id) + ";n=" + std::to_string(n);
}

}  // namespace

std::string FamilyConfig::descriptor() const {
  if (id == FamilyId::kReg2) return reg2_descriptor(gen_params(n));
  return toy_descriptor(id, n);
}

Digest FamilyConfig::digest() const { return sha256(descriptor()); }

void FamilyConfig::validate() const {
  switch (id) {
    case FamilyId::kReg2:
      require_valid(gen_params(n));
      return;
    case FamilyId::kToyLinear:
      if (n < 2 || n > ToyLinear::kMaxDim + 1) {
        throw Error(ErrorCode::kSizeLimit, "toy-linear n must be in [2, 24]");
      }
      return;
    case FamilyId::kToyPerm:
      if (n < 2 || n > ToyPermutation::kMaxDim + 1) {
        throw Error(ErrorCode::kSizeLimit, "toy-perm n must be in [2, 20]");
      }
      return;
  }
}

std::vector<BitString> PublicFunction::enumerate_preimages(std::span<const std::uint8_t> y) const {
  const std::size_t bits = domain_bits();
  if (bits > kMaxEnumerationBits) {
    throw Error(ErrorCode::kSizeLimit, "domain too large to enumerate");
  }
  std::vector<BitString> out;
  BitString x(bits, 0);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    for (std::size_t i = 0; i < bits; ++i) x[i] = static_cast<std::uint8_t>((v >> i) & 1u);
    Bytes fx;
    try {
      fx = eval(x);
    } catch (const Error&) {
      continue;
    }
    if (fx.size() == y.size() && std::equal(fx.begin(), fx.end(), y.begin())) out.push_back(x);
  }
  return out;
}

namespace {

// ---- toy families: input bits are x (dim bits, little-endian) then c ----

std::uint32_t bits_to_u32(const BitString& x, int dim) {
  std::uint32_t v = 0;
  for (int i = 0; i < dim; ++i) {
    if (x[i] > 1) throw Error(ErrorCode::kInvalidArgument, "input is not a bit string");
    v |= static_cast<std::uint32_t>(x[i]) << i;
  }
  return v;
}

BitString u32_to_bits(std::uint32_t v, int dim, int c) {
  BitString x(static_cast<std::size_t>(dim) + 1);
  for (int i = 0; i < dim; ++i) x[i] = static_cast<std::uint8_t>((v >> i) & 1u);
  x[dim] = static_cast<std::uint8_t>(c);
  return x;
}

template <class Input>
Input split_input(const BitString& x, int dim) {
  if (x.size() != static_cast<std::size_t>(dim) + 1) {
    throw Error(ErrorCode::kDimensionMismatch, "input has wrong length");
  }
  if (x[dim] > 1) throw Error(ErrorCode::kInvalidArgument, "input is not a bit string");
  return Input{bits_to_u32(x, dim), x[dim]};
}

Bytes range_bytes(std::uint32_t y) {
  Bytes out;
  put_u32(out, y);
  return out;
}

std::optional<std::uint32_t> parse_range(std::span<const std::uint8_t> y) {
  if (y.size() != 4) return std::nullopt;
  ByteReader r(y);
  return r.u32();
}

void put_u32_list(Bytes& out, const std::vector<std::uint32_t>& v) {
  for (auto x : v) put_u32(out, x);
}

std::vector<std::uint32_t> read_u32_list(ByteReader& r, std::size_t count) {
  std::vector<std::uint32_t> v(count);
  for (auto& x : v) x = r.u32();
  return v;
}

int read_toy_dim(ByteReader& r, FamilyId id, int max_dim) {
  if (r.u8() != static_cast<std::uint8_t>(id)) throw Error(ErrorCode::kParse, "family tag mismatch");
  std::uint32_t dim = r.u32();
  if (dim < 1 || dim > static_cast<std::uint32_t>(max_dim)) {
    throw Error(ErrorCode::kParse, "toy dimension out of range");
  }
  return static_cast<int>(dim);
}

class ToyLinearPublic final : public PublicFunction {
 public:
  explicit ToyLinearPublic(ToyLinearTwoRegular::Index index) : index_(std::move(index)) {}

  FamilyId family() const override { return FamilyId::kToyLinear; }
  std::size_t domain_bits() const override { return static_cast<std::size_t>(index_.base.dim) + 1; }
  BitString sample_domain(Rng& rng) const override {
    auto x = ToyLinear::sample_domain(index_.base, rng);
    return u32_to_bits(x, index_.base.dim, rng.bit());
  }
  Bytes eval(const BitString& x) const override {
    auto in = split_input<ToyLinearTwoRegular::Input>(x, index_.base.dim);
    return range_bytes(ToyLinearTwoRegular::eval(index_, in));
  }
  Bytes serialize() const override {
    Bytes out;
    put_u8(out, static_cast<std::uint8_t>(FamilyId::kToyLinear));
    put_u32(out, static_cast<std::uint32_t>(index_.base.dim));
    put_u32_list(out, index_.base.columns);
    put_u32(out, index_.image_of_x0);
    return out;
  }
  std::string descriptor() const override {
    return toy_descriptor(FamilyId::kToyLinear, domain_bits());
  }

  const ToyLinearTwoRegular::Index& index() const { return index_; }

 private:
  ToyLinearTwoRegular::Index index_;
};

class ToyLinearSecret final : public SecretFunction {
 public:
  ToyLinearSecret(std::shared_ptr<const ToyLinearPublic> pub, ToyLinearTwoRegular::Trapdoor td)
      : pub_(std::move(pub)), td_(std::move(td)) {}

  const PublicFunction& public_function() const override { return *pub_; }
  ClawResult invert(std::span<const std::uint8_t> y) const override {
    auto v = parse_range(y);
    if (!v) return InversionFailure{"malformed image"};
    auto pair = ToyLinearTwoRegular::inv(pub_->index(), td_, *v);
    if (!pair) return InversionFailure{"image outside range"};
    const int dim = pub_->index().base.dim;
    return Claw{u32_to_bits(pair->first.x, dim, 0), u32_to_bits(pair->second.x, dim, 1)};
  }
  Bytes serialize_trapdoor() const override {
    Bytes out;
    put_u32_list(out, td_.base.inverse_columns);
    put_u32(out, td_.x0);
    return out;
  }

 private:
  std::shared_ptr<const ToyLinearPublic> pub_;
  ToyLinearTwoRegular::Trapdoor td_;
};

class ToyPermPublic final : public PublicFunction {
 public:
  explicit ToyPermPublic(ToyPermTwoRegular::Index index) : index_(std::move(index)) {}

  FamilyId family() const override { return FamilyId::kToyPerm; }
  std::size_t domain_bits() const override { return static_cast<std::size_t>(index_.first.dim) + 1; }
  BitString sample_domain(Rng& rng) const override {
    auto x = ToyPermutation::sample_domain(index_.first, rng);
    return u32_to_bits(x, index_.first.dim, rng.bit());
  }
  Bytes eval(const BitString& x) const override {
    auto in = split_input<ToyPermTwoRegular::Input>(x, index_.first.dim);
    return range_bytes(ToyPermTwoRegular::eval(index_, in));
  }
  Bytes serialize() const override {
    Bytes out;
    put_u8(out, static_cast<std::uint8_t>(FamilyId::kToyPerm));
    put_u32(out, static_cast<std::uint32_t>(index_.first.dim));
    put_u32_list(out, index_.first.table);
    put_u32_list(out, index_.second.table);
    return out;
  }
  std::string descriptor() const override {
    return toy_descriptor(FamilyId::kToyPerm, domain_bits());
  }

  const ToyPermTwoRegular::Index& index() const { return index_; }

 private:
  ToyPermTwoRegular::Index index_;
};

class ToyPermSecret final : public SecretFunction {
 public:
  ToyPermSecret(std::shared_ptr<const ToyPermPublic> pub, ToyPermTwoRegular::Trapdoor td)
      : pub_(std::move(pub)), td_(std::move(td)) {}

  const PublicFunction& public_function() const override { return *pub_; }
  ClawResult invert(std::span<const std::uint8_t> y) const override {
    auto v = parse_range(y);
    if (!v) return InversionFailure{"malformed image"};
    auto pair = ToyPermTwoRegular::inv(pub_->index(), td_, *v);
    if (!pair) return InversionFailure{"image outside range"};
    const int dim = pub_->index().first.dim;
    return Claw{u32_to_bits(pair->first.x, dim, 0), u32_to_bits(pair->second.x, dim, 1)};
  }
  Bytes serialize_trapdoor() const override {
    Bytes out;
    put_u32_list(out, td_.first.inverse);
    put_u32_list(out, td_.second.inverse);
    return out;
  }

 private:
  std::shared_ptr<const ToyPermPublic> pub_;
  ToyPermTwoRegular::Trapdoor td_;
};

// ---- reg2: input bits are the canonical preimage encoding ----

class Reg2Public final : public PublicFunction {
 public:
  explicit Reg2Public(Reg2Key key) : key_(std::move(key)) {}

  FamilyId family() const override { return FamilyId::kReg2; }
  std::size_t domain_bits() const override { return params().domain_bits(); }
  BitString sample_domain(Rng& rng) const override {
    return encode_preimage(sample_reg2_domain(params(), rng), params());
  }
  Bytes eval(const BitString& x) const override {
    Bytes out;
    qfactory::serialize(reg2_eval(key_, decode_preimage(x, params())), out);
    return out;
  }
  Bytes serialize() const override { return write_key(key_); }
  std::string descriptor() const override { return reg2_descriptor(params()); }

  const Reg2Key& key() const { return key_; }
  const LweParams& params() const { return key_.a.params; }

 private:
  Reg2Key key_;
};

class Reg2Secret final : public SecretFunction {
 public:
  Reg2Secret(std::shared_ptr<const Reg2Public> pub, Reg2Trapdoor td)
      : pub_(std::move(pub)), td_(std::move(td)) {}

  const PublicFunction& public_function() const override { return *pub_; }
  ClawResult invert(std::span<const std::uint8_t> y) const override {
    const LweParams& p = pub_->params();
    std::optional<ZqVector> b;
    try {
      ByteReader r(y);
      b = r.zq_vector(p.modulus());
      if (!r.done() || b->size() != p.m()) b.reset();
    } catch (const Error&) {
      b.reset();
    }
    if (!b) return InversionFailure{"malformed image"};
    Reg2Inversion inv = reg2_inv(pub_->key(), td_, *b);
    if (auto* two = std::get_if<TwoPreimages>(&inv)) {
      return Claw{encode_preimage(two->first, p), encode_preimage(two->second, p)};
    }
    if (auto* one = std::get_if<NoSecondPreimage>(&inv)) {
      return SinglePreimage{encode_preimage(one->only, p)};
    }
    return InversionFailure{std::get<InversionFailed>(inv).reason};
  }
  Bytes serialize_trapdoor() const override { return write_trapdoor(pub_->params(), td_); }

 private:
  std::shared_ptr<const Reg2Public> pub_;
  Reg2Trapdoor td_;
};

}  // namespace

KeyPair make_reg2_keys(Reg2Key key, Reg2Trapdoor td) {
  auto pub = std::make_shared<const Reg2Public>(std::move(key));
  auto secret = std::make_unique<Reg2Secret>(pub, std::move(td));
  return KeyPair{pub, std::move(secret)};
}

KeyPair generate_keys(const FamilyConfig& config, Rng& rng) {
  config.validate();
  switch (config.id) {
    case FamilyId::kReg2: {
      auto [key, td] = reg2_gen(gen_params(config.n), rng, config.reg2);
      return make_reg2_keys(std::move(key), std::move(td));
    }
    case FamilyId::kToyLinear: {
      auto [base, base_td] = ToyLinear::gen(static_cast<int>(config.n - 1), rng);
      auto [index, td] = ToyLinearTwoRegular::gen(std::move(base), std::move(base_td), rng);
      auto pub = std::make_shared<const ToyLinearPublic>(std::move(index));
      auto secret = std::make_unique<ToyLinearSecret>(pub, std::move(td));
      return KeyPair{pub, std::move(secret)};
    }
    case FamilyId::kToyPerm: {
      const int dim = static_cast<int>(config.n - 1);
      auto first = ToyPermutation::gen(dim, rng);
      auto second = config.toy_perm_same_keys ? first : ToyPermutation::gen(dim, rng);
      auto [index, td] = ToyPermTwoRegular::gen_from(std::move(first), std::move(second));
      auto pub = std::make_shared<const ToyPermPublic>(std::move(index));
      auto secret = std::make_unique<ToyPermSecret>(pub, std::move(td));
      return KeyPair{pub, std::move(secret)};
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown family");
}

std::shared_ptr<const PublicFunction> load_public_function(FamilyId id,
                                                           std::span<const std::uint8_t> bytes) {
  switch (id) {
    case FamilyId::kReg2:
      return std::make_shared<const Reg2Public>(read_reg2_key(bytes));
    case FamilyId::kToyLinear: {
      ByteReader r(bytes);
      const int dim = read_toy_dim(r, id, ToyLinear::kMaxDim);
      ToyLinearTwoRegular::Index index;
      index.base.dim = dim;
      index.base.columns = read_u32_list(r, static_cast<std::size_t>(dim));
      index.image_of_x0 = r.u32();
      if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes in public key");
      const std::uint32_t mask = (1u << dim) - 1u;
      for (auto c : index.base.columns) {
        if (c > mask) throw Error(ErrorCode::kParse, "toy-linear column out of range");
      }
      if (index.image_of_x0 > mask) throw Error(ErrorCode::kParse, "toy-linear image out of range");
      return std::make_shared<const ToyLinearPublic>(std::move(index));
    }
    case FamilyId::kToyPerm: {
      ByteReader r(bytes);
      const int dim = read_toy_dim(r, id, ToyPermutation::kMaxDim);
      const std::size_t size = std::size_t{1} << dim;
      ToyPermTwoRegular::Index index;
      index.first.dim = dim;
      index.second.dim = dim;
      index.first.table = read_u32_list(r, size);
      index.second.table = read_u32_list(r, size);
      if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes in public key");
      for (const auto* table : {&index.first.table, &index.second.table}) {
        std::vector<std::uint8_t> seen(size, 0);
        for (auto v : *table) {
          if (v >= size || seen[v]) throw Error(ErrorCode::kParse, "toy-perm table is not a permutation");
          seen[v] = 1;
        }
      }
      return std::make_shared<const ToyPermPublic>(std::move(index));
    }
  }
  throw Error(ErrorCode::kParse, "unknown family");
}

}  // namespace qfactory
