#include "qfactory/wire.hpp"

#include <algorithm>

namespace qfactory {

namespace {

enum Tag : std::uint8_t {
  kHello = 1,
  kPublicKey = 2,
  kMeasuredY = 3,
  kMeasureInstruction = 4,
  kOutcomes = 5,
  kResult = 6,
  kError = 7,
};

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

std::string read_string(ByteReader& r) {
  auto len = r.u32();
  auto bytes = r.take(len);
  return std::string(bytes.begin(), bytes.end());
}

struct Encoder {
  std::vector<std::uint8_t>& out;

  void operator()(const wire::Hello& m) {
    put_u8(out, kHello);
    put_u8(out, m.version);
    out.insert(out.end(), m.params_digest.begin(), m.params_digest.end());
    put_u8(out, m.family_id);
    put_u8(out, m.seed ? 1 : 0);
    if (m.seed) put_u64(out, *m.seed);
  }
  void operator()(const wire::PublicKey& m) {
    put_u8(out, kPublicKey);
    out.insert(out.end(), m.bytes.begin(), m.bytes.end());
  }
  void operator()(const wire::MeasuredY& m) {
    put_u8(out, kMeasuredY);
    out.insert(out.end(), m.bytes.begin(), m.bytes.end());
  }
  void operator()(const wire::MeasureInstruction& m) {
    put_u8(out, kMeasureInstruction);
    put_u32(out, static_cast<std::uint32_t>(m.alphas.size()));
    for (int a : m.alphas) {
      if (a < 0 || a > 7) throw Error(ErrorCode::kInvalidArgument, "alpha must be in 0..7");
      put_u8(out, static_cast<std::uint8_t>(a));
    }
  }
  void operator()(const wire::Outcomes& m) {
    put_u8(out, kOutcomes);
    put_u32(out, static_cast<std::uint32_t>(m.b.size()));
    std::vector<std::uint8_t> packed((m.b.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < m.b.size(); ++i) {
      if (m.b[i] > 1) throw Error(ErrorCode::kInvalidArgument, "outcomes must be bits");
      packed[i / 8] |= static_cast<std::uint8_t>(m.b[i] << (i % 8));
    }
    out.insert(out.end(), packed.begin(), packed.end());
  }
  void operator()(const wire::Result& m) {
    put_u8(out, kResult);
    put_u8(out, m.ok ? 0 : 1);
    put_string(out, m.ok ? std::string() : m.abort_reason);
  }
  void operator()(const wire::ErrorMsg& m) {
    put_u8(out, kError);
    put_u16(out, static_cast<std::uint16_t>(m.code));
    put_string(out, m.detail);
  }
};

WireMessage decode_payload(std::uint8_t tag, ByteReader& r) {
  switch (tag) {
    case kHello: {
      wire::Hello m;
      m.version = r.u8();
      auto d = r.take(32);
      std::copy(d.begin(), d.end(), m.params_digest.begin());
      m.family_id = r.u8();
      auto has_seed = r.u8();
      if (has_seed > 1) throw FrameError("bad seed flag");
      if (has_seed) m.seed = r.u64();
      return m;
    }
    case kPublicKey:
    case kMeasuredY: {
      auto rest = r.take(r.remaining());
      std::vector<std::uint8_t> bytes(rest.begin(), rest.end());
      if (tag == kPublicKey) return wire::PublicKey{std::move(bytes)};
      return wire::MeasuredY{std::move(bytes)};
    }
    case kMeasureInstruction: {
      wire::MeasureInstruction m;
      auto count = r.u32();
      if (count > r.remaining()) throw FrameError("alpha count exceeds frame");
      m.alphas.resize(count);
      for (auto& a : m.alphas) {
        a = r.u8();
        if (a > 7) throw FrameError("alpha out of range");
      }
      return m;
    }
    case kOutcomes: {
      wire::Outcomes m;
      auto count = r.u32();
      auto packed = r.take((static_cast<std::size_t>(count) + 7) / 8);
      m.b.resize(count);
      for (std::size_t i = 0; i < count; ++i) m.b[i] = (packed[i / 8] >> (i % 8)) & 1u;
      return m;
    }
    case kResult: {
      wire::Result m;
      auto status = r.u8();
      if (status > 1) throw FrameError("bad result status");
      m.ok = status == 0;
      m.abort_reason = read_string(r);
      return m;
    }
    case kError: {
      wire::ErrorMsg m;
      auto code = r.u16();
      if (code < 1 || code > 5) throw FrameError("unknown error kind " + std::to_string(code));
      m.code = static_cast<wire::ErrorKind>(code);
      m.detail = read_string(r);
      return m;
    }
    default:
      throw FrameError("unknown message tag " + std::to_string(tag));
  }
}

}  // namespace

std::string message_name(const WireMessage& msg) {
  static const char* names[] = {"Hello", "PublicKey", "MeasuredY", "MeasureInstruction",
                                "Outcomes", "Result", "Error"};
  return names[msg.index()];
}

const char* error_kind_name(wire::ErrorKind kind) {
  switch (kind) {
    case wire::ErrorKind::kFrame: return "FRAME";
    case wire::ErrorKind::kVersion: return "VERSION";
    case wire::ErrorKind::kParams: return "PARAMS";
    case wire::ErrorKind::kState: return "STATE";
    case wire::ErrorKind::kInternal: return "INTERNAL";
  }
  return "UNKNOWN";
}

std::vector<std::uint8_t> encode_frame(const WireMessage& msg) {
  std::vector<std::uint8_t> out(4, 0);
  std::visit(Encoder{out}, msg);
  const std::size_t len = out.size() - 4;
  if (len > kMaxFrameBytes) throw FrameError("frame exceeds 64 MiB");
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(len >> (24 - 8 * i));
  return out;
}

std::uint32_t decode_length(std::span<const std::uint8_t, 4> prefix) {
  std::uint32_t len = 0;
  for (auto b : prefix) len = (len << 8) | b;
  if (len == 0) throw FrameError("empty frame");
  if (len > kMaxFrameBytes) throw FrameError("frame exceeds 64 MiB");
  return len;
}

WireMessage decode_body(std::span<const std::uint8_t> body) {
  if (body.empty()) throw FrameError("empty frame");
  ByteReader r(body.subspan(1));
  WireMessage msg = [&] {
    try {
      return decode_payload(body[0], r);
    } catch (const FrameError&) {
      throw;
    } catch (const Error& e) {
      throw FrameError(std::string("truncated payload: ") + e.what());
    }
  }();
  if (!r.done()) throw FrameError("trailing bytes in frame");
  return msg;
}

}  // namespace qfactory
