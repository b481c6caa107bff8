#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qfactory/error.hpp"
#include "qfactory/zq.hpp"

namespace qfactory {

inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

namespace wire {

struct Hello {
  std::uint8_t version = kProtocolVersion;
  std::array<std::uint8_t, 32> params_digest{};
  std::uint8_t family_id = 0;
  // Client: requested server seed. Server: the seed it actually uses.
  std::optional<std::uint64_t> seed;
  bool operator==(const Hello&) const = default;
};

struct PublicKey {
  std::vector<std::uint8_t> bytes;
  bool operator==(const PublicKey&) const = default;
};

struct MeasuredY {
  std::vector<std::uint8_t> bytes;
  bool operator==(const MeasuredY&) const = default;
};

struct MeasureInstruction {
  std::vector<int> alphas;
  bool operator==(const MeasureInstruction&) const = default;
};

struct Outcomes {
  BitString b;
  bool operator==(const Outcomes&) const = default;
};

struct Result {
  bool ok = true;
  std::string abort_reason;
  bool operator==(const Result&) const = default;
};

enum class ErrorKind : std::uint16_t {
  kFrame = 1,
  kVersion = 2,
  kParams = 3,
  kState = 4,
  kInternal = 5,
};

struct ErrorMsg {
  ErrorKind code = ErrorKind::kInternal;
  std::string detail;
  bool operator==(const ErrorMsg&) const = default;
};

}  // namespace wire

using WireMessage = std::variant<wire::Hello, wire::PublicKey, wire::MeasuredY,
                                 wire::MeasureInstruction, wire::Outcomes, wire::Result,
                                 wire::ErrorMsg>;

std::string message_name(const WireMessage& msg);
const char* error_kind_name(wire::ErrorKind kind);

// Malformed or oversized frame.
class FrameError : public Error {
 public:
  explicit FrameError(const std::string& what) : Error(ErrorCode::kParse, what) {}
};

// Full frame: 4-byte big-endian length of (tag + payload), tag byte, payload.
std::vector<std::uint8_t> encode_frame(const WireMessage& msg);
// Decodes tag + payload (the bytes after the length prefix).
WireMessage decode_body(std::span<const std::uint8_t> body);
// Parses the length prefix; throws FrameError for 0 or more than kMaxFrameBytes.
std::uint32_t decode_length(std::span<const std::uint8_t, 4> prefix);

}  // namespace qfactory
