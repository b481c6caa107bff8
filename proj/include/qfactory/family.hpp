#pragma once

// Runtime view of a two-regular trapdoor family, as seen by the protocol.
// Inputs are bit strings whose final bit is the tag c; images are opaque byte
// strings. The public half never carries trapdoor material.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfactory/reg2.hpp"
#include "qfactory/rng.hpp"
#include "qfactory/zq.hpp"

namespace qfactory {

enum class FamilyId : std::uint8_t {
  kReg2 = 1,
  kToyLinear = 2,
  kToyPerm = 3,
};

std::string family_name(FamilyId id);
// Throws kInvalidArgument for unknown names.
FamilyId parse_family(const std::string& name);
std::optional<FamilyId> family_from_byte(std::uint8_t b);
bool is_insecure_toy(FamilyId id);

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

struct FamilyConfig {
  FamilyId id = FamilyId::kToyLinear;
  // Security parameter for reg2; number of input bits (including c) for toys.
  std::uint64_t n = 8;
  Reg2GenOptions reg2;
  // toy-perm only: both keys get the same permutation, so every claw differs
  // only in the final bit.
  bool toy_perm_same_keys = false;

  // Canonical descriptor shared by both parties; its SHA-256 is the Hello digest.
  std::string descriptor() const;
  Digest digest() const;
  // Throws kSizeLimit / kInvalidParams for unsupported sizes.
  void validate() const;
};

class PublicFunction {
 public:
  virtual ~PublicFunction() = default;

  virtual FamilyId family() const = 0;
  virtual std::size_t domain_bits() const = 0;
  virtual BitString sample_domain(Rng& rng) const = 0;
  // Throws kNormViolation / kInvalidArgument for inputs outside the domain.
  virtual Bytes eval(const BitString& x) const = 0;
  virtual Bytes serialize() const = 0;
  // Descriptor of the parameters this key was generated for.
  virtual std::string descriptor() const = 0;

  // All inputs mapping to y, by exhaustive search. Limited to small domains.
  std::vector<BitString> enumerate_preimages(std::span<const std::uint8_t> y) const;

  static constexpr std::size_t kMaxEnumerationBits = 22;
};

struct Claw {
  BitString x;   // c = 0
  BitString xp;  // c = 1
};
struct SinglePreimage {
  BitString x;
};
struct InversionFailure {
  std::string reason;
};
using ClawResult = std::variant<Claw, SinglePreimage, InversionFailure>;

class SecretFunction {
 public:
  virtual ~SecretFunction() = default;
  virtual const PublicFunction& public_function() const = 0;
  virtual ClawResult invert(std::span<const std::uint8_t> y) const = 0;
  // Serialized trapdoor, for key files and wire-leak checks only.
  virtual Bytes serialize_trapdoor() const = 0;
};

struct KeyPair {
  std::shared_ptr<const PublicFunction> pub;
  std::unique_ptr<SecretFunction> secret;
};

KeyPair generate_keys(const FamilyConfig& config, Rng& rng);

// Parses a serialized public function; throws kParse on malformed input.
std::shared_ptr<const PublicFunction> load_public_function(FamilyId id,
                                                           std::span<const std::uint8_t> bytes);

// Builds a key pair from an existing reg2 key and trapdoor (e.g. read from files).
KeyPair make_reg2_keys(Reg2Key key, Reg2Trapdoor td);

}  // namespace qfactory
