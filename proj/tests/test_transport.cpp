#include <thread>
#include <unordered_set>

#include <boost/asio.hpp>
#include <gtest/gtest.h>

#include "qfactory/protocol.hpp"
#include "qfactory/wire.hpp"

using namespace qfactory;
namespace asio = boost::asio;

namespace {

WireMessage round_trip(const WireMessage& m) {
  auto frame = encode_frame(m);
  std::array<std::uint8_t, 4> prefix;
  std::copy_n(frame.begin(), 4, prefix.begin());
  EXPECT_EQ(decode_length(prefix), frame.size() - 4);
  return decode_body(std::span(frame).subspan(4));
}

void expect_frame_error(std::vector<std::uint8_t> body) {
  EXPECT_THROW(decode_body(body), FrameError);
}

// Raw socket client: writes bytes, half-closes, reads one frame back.
std::optional<WireMessage> raw_exchange(std::uint16_t port, const std::vector<std::uint8_t>& bytes) {
  asio::io_context io;
  asio::ip::tcp::socket sock(io);
  sock.connect({asio::ip::make_address("127.0.0.1"), port});
  asio::write(sock, asio::buffer(bytes));
  sock.shutdown(asio::ip::tcp::socket::shutdown_send);
  std::array<std::uint8_t, 4> prefix;
  boost::system::error_code ec;
  asio::read(sock, asio::buffer(prefix), ec);
  if (ec) return std::nullopt;
  std::vector<std::uint8_t> body(decode_length(prefix));
  asio::read(sock, asio::buffer(body), ec);
  if (ec) return std::nullopt;
  return decode_body(body);
}

std::vector<std::uint8_t> be32(std::uint32_t v) {
  return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
          static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

FamilyConfig toy_config() { return FamilyConfig{.id = FamilyId::kToyLinear, .n = 6}; }

// Runs a server for `connections` sessions on an ephemeral port.
struct ServerFixture {
  explicit ServerFixture(ServerConfig cfg, std::size_t connections)
      : server("127.0.0.1", 0), config(std::move(cfg)) {
    thread = std::thread([this, connections] {
      server.run(
          [this](Transport& t) {
            ServerReport r = run_server(t, config);
            std::lock_guard lock(mu);
            reports.push_back(std::move(r));
          },
          connections);
    });
  }
  ~ServerFixture() {
    if (thread.joinable()) thread.join();
  }
  void join() { thread.join(); }

  TcpServer server;
  ServerConfig config;
  std::thread thread;
  std::mutex mu;
  std::vector<ServerReport> reports;
};

}  // namespace

TEST(Wire, EveryMessageRoundTrips) {
  wire::Hello h;
  h.family_id = 2;
  h.params_digest[0] = 0xab;
  h.params_digest[31] = 0x01;
  EXPECT_EQ(std::get<wire::Hello>(round_trip(h)), h);
  h.seed = 0x0123456789abcdefULL;
  EXPECT_EQ(std::get<wire::Hello>(round_trip(h)), h);

  wire::PublicKey pk{{1, 2, 3, 0, 255}};
  EXPECT_EQ(std::get<wire::PublicKey>(round_trip(pk)), pk);
  wire::MeasuredY y{{9, 8, 7}};
  EXPECT_EQ(std::get<wire::MeasuredY>(round_trip(y)), y);
  wire::MeasureInstruction mi{{0, 7, 3, 4, 1}};
  EXPECT_EQ(std::get<wire::MeasureInstruction>(round_trip(mi)), mi);
  wire::Outcomes oc{{1, 0, 1, 1, 0, 0, 0, 1, 1}};
  EXPECT_EQ(std::get<wire::Outcomes>(round_trip(oc)), oc);
  wire::Result ok{true, ""};
  EXPECT_EQ(std::get<wire::Result>(round_trip(ok)), ok);
  wire::Result ab{false, "no second preimage"};
  EXPECT_EQ(std::get<wire::Result>(round_trip(ab)), ab);
  wire::ErrorMsg e{wire::ErrorKind::kVersion, "protocol version 9"};
  EXPECT_EQ(std::get<wire::ErrorMsg>(round_trip(e)), e);
}

TEST(Wire, FrameLayout) {
  auto f = encode_frame(wire::PublicKey{{0xaa, 0xbb}});
  EXPECT_EQ(f, (std::vector<std::uint8_t>{0, 0, 0, 3, 2, 0xaa, 0xbb}));
  auto big = encode_frame(wire::MeasuredY{std::vector<std::uint8_t>(70000, 1)});
  EXPECT_EQ(std::vector<std::uint8_t>(big.begin(), big.begin() + 5),
            (std::vector<std::uint8_t>{0, 1, 0x11, 0x71, 3}));
}

TEST(Wire, LengthBounds) {
  std::array<std::uint8_t, 4> zero{0, 0, 0, 0};
  EXPECT_THROW(decode_length(zero), FrameError);
  auto over = be32(kMaxFrameBytes + 1);
  std::array<std::uint8_t, 4> o;
  std::copy(over.begin(), over.end(), o.begin());
  EXPECT_THROW(decode_length(o), FrameError);
  auto max = be32(kMaxFrameBytes);
  std::copy(max.begin(), max.end(), o.begin());
  EXPECT_EQ(decode_length(o), kMaxFrameBytes);
}

TEST(Wire, MalformedBodies) {
  expect_frame_error({});
  expect_frame_error({0});
  expect_frame_error({8});
  expect_frame_error({1, 1});                              // truncated hello
  expect_frame_error({4, 2, 0, 0, 0, 1});                  // alpha count past the end
  expect_frame_error({4, 1, 0, 0, 0, 9});                  // alpha out of range
  expect_frame_error({5, 9, 0, 0, 0, 0xff});               // outcome count past the end
  expect_frame_error({6, 2, 0, 0, 0, 0});                  // bad result status
  expect_frame_error({6, 0, 0, 0, 0, 0, 1});               // trailing byte
  expect_frame_error({7, 9, 0, 0, 0, 0, 0});               // unknown error kind
}

TEST(Wire, EncoderRejectsBadValues) {
  EXPECT_THROW(encode_frame(wire::MeasureInstruction{{8}}), Error);
  EXPECT_THROW(encode_frame(wire::Outcomes{{2}}), Error);
}

TEST(InProcess, DeliversInOrder) {
  auto [a, b] = make_in_process_pair();
  a->send(wire::MeasuredY{{1}});
  a->send(wire::Result{true, ""});
  EXPECT_TRUE(std::holds_alternative<wire::MeasuredY>(b->receive()));
  EXPECT_TRUE(std::holds_alternative<wire::Result>(b->receive()));
  a->close();
  EXPECT_THROW(b->receive(), TransportClosed);
}

TEST(InProcess, FullSessionWithoutTrapdoorOnTheWire) {
  FamilyConfig cfg{.id = FamilyId::kReg2, .n = 8};
  auto [ct, st] = make_in_process_pair();
  RecordingTransport rec(*ct);
  ServerReport report;
  std::thread server([&] { report = run_server(*st, ServerConfig{.family = cfg}); });
  Transcript t = run_client(rec, cfg, 31, 32);
  server.join();
  EXPECT_TRUE(report.completed);
  EXPECT_EQ(report.seed, 32u);
  EXPECT_EQ(t.to_line(), run_honest(cfg, Backend::kAnalytic, 31, 32).to_line());

  const std::size_t w = 32;
  std::unordered_set<std::string> windows;
  for (const auto& f : rec.frames()) {
    for (std::size_t i = 0; i + w <= f.size(); ++i) windows.emplace(f.begin() + i, f.begin() + i + w);
  }
  Bytes td = ClientSession(cfg, 31).trapdoor_bytes();
  ASSERT_GT(td.size(), w);
  // The parameter header is shared with the public key file.
  const std::size_t header = 4 + 2 + 5 * 8;
  std::size_t hits = 0;
  for (std::size_t i = header; i + w <= td.size(); ++i) {
    hits += windows.count(std::string(td.begin() + i, td.begin() + i + w));
  }
  EXPECT_EQ(hits, 0u);
}

TEST(Tcp, HonestSessionMatchesInProcess) {
  ServerFixture fx(ServerConfig{.family = toy_config(), .backend = Backend::kStateVector}, 1);
  auto t = tcp_connect("127.0.0.1", fx.server.port());
  Transcript tr = run_client(*t, toy_config(), 41, 42);
  t->close();
  fx.join();
  ASSERT_EQ(fx.reports.size(), 1u);
  EXPECT_TRUE(fx.reports[0].completed);
  ASSERT_TRUE(fx.reports[0].output_qubit.has_value());
  Transcript local = run_honest(toy_config(), Backend::kStateVector, 41, 42);
  EXPECT_EQ(tr.outcome, local.outcome);
  EXPECT_EQ(tr.b, local.b);
  EXPECT_GE(fidelity(*fx.reports[0].output_qubit, std::get<QubitAngle>(tr.outcome)), 1 - 1e-9);
}

TEST(Tcp, TruncatedFrameGetsFrameErrorAndServerStaysUp) {
  ServerFixture fx(ServerConfig{.family = toy_config()}, 3);
  const std::uint16_t port = fx.server.port();

  auto hello = encode_frame(wire::Hello{});
  std::vector<std::uint8_t> truncated(hello.begin(), hello.begin() + 10);
  auto reply = raw_exchange(port, truncated);
  ASSERT_TRUE(reply.has_value());
  EXPECT_EQ(std::get<wire::ErrorMsg>(*reply).code, wire::ErrorKind::kFrame);

  auto oversize = be32(kMaxFrameBytes + 1);
  oversize.push_back(1);
  reply = raw_exchange(port, oversize);
  ASSERT_TRUE(reply.has_value());
  EXPECT_EQ(std::get<wire::ErrorMsg>(*reply).code, wire::ErrorKind::kFrame);

  auto t = tcp_connect("127.0.0.1", port);
  Transcript tr = run_client(*t, toy_config(), 5, 6);
  EXPECT_TRUE(std::holds_alternative<QubitAngle>(tr.outcome));
  t->close();
  fx.join();
  ASSERT_EQ(fx.reports.size(), 3u);
  int frame_errors = 0, completed = 0;
  for (const auto& r : fx.reports) {
    frame_errors += r.error_sent && r.error_sent->code == wire::ErrorKind::kFrame;
    completed += r.completed;
  }
  EXPECT_EQ(frame_errors, 2);
  EXPECT_EQ(completed, 1);
}

TEST(Tcp, VersionMismatch) {
  ServerFixture fx(ServerConfig{.family = toy_config()}, 1);
  auto t = tcp_connect("127.0.0.1", fx.server.port());
  wire::Hello h;
  h.version = kProtocolVersion + 1;
  h.params_digest = toy_config().digest();
  h.family_id = static_cast<std::uint8_t>(FamilyId::kToyLinear);
  t->send(h);
  auto reply = t->receive();
  EXPECT_EQ(std::get<wire::ErrorMsg>(reply).code, wire::ErrorKind::kVersion);
  t->close();
  fx.join();
}

TEST(Tcp, ParameterMismatchIsRejected) {
  ServerFixture fx(ServerConfig{.family = toy_config()}, 1);
  auto t = tcp_connect("127.0.0.1", fx.server.port());
  FamilyConfig other{.id = FamilyId::kToyLinear, .n = 7};
  try {
    run_client(*t, other, 1, std::nullopt);
    FAIL() << "server accepted mismatched parameters";
  } catch (const RemoteError& e) {
    EXPECT_EQ(e.msg.code, wire::ErrorKind::kParams);
  }
  t->close();
  fx.join();
}

TEST(Tcp, WrongFirstMessageIsAStateError) {
  ServerFixture fx(ServerConfig{.family = toy_config()}, 1);
  auto t = tcp_connect("127.0.0.1", fx.server.port());
  t->send(wire::Outcomes{{1}});
  EXPECT_EQ(std::get<wire::ErrorMsg>(t->receive()).code, wire::ErrorKind::kState);
  t->close();
  fx.join();
}

TEST(Tcp, FixedSeedPolicyOverridesRequest) {
  ServerConfig cfg{.family = toy_config(), .seed_policy = SeedPolicy::kFixed, .fixed_seed = 500};
  ServerFixture fx(cfg, 1);
  auto t = tcp_connect("127.0.0.1", fx.server.port());
  Transcript tr = run_client(*t, toy_config(), 1, 2);
  t->close();
  fx.join();
  EXPECT_EQ(tr.server_seed, fx.reports.at(0).seed);
  EXPECT_NE(tr.server_seed, 2u);
}

TEST(Tcp, ConnectFailureIsAnError) {
  std::uint16_t port;
  {
    TcpServer probe("127.0.0.1", 0);
    port = probe.port();
  }
  EXPECT_THROW(tcp_connect("127.0.0.1", port), std::exception);
}
