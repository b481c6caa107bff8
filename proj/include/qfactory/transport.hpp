#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qfactory/wire.hpp"

namespace qfactory {

// Peer closed the connection at a frame boundary.
class TransportClosed : public Error {
 public:
  explicit TransportClosed(const std::string& what) : Error(ErrorCode::kProtocol, what) {}
};

// Reliable, in-order frame transport. Messages are always serialized, so the
// in-process and TCP implementations carry identical bytes.
class Transport {
 public:
  virtual ~Transport() = default;

  void send(const WireMessage& msg) { send_frame(encode_frame(msg)); }
  WireMessage receive() { return decode_body(receive_body()); }

  virtual void send_frame(const std::vector<std::uint8_t>& frame) = 0;
  // Returns tag + payload of the next frame.
  virtual std::vector<std::uint8_t> receive_body() = 0;
  virtual void close() = 0;
};

// Two connected in-process endpoints backed by blocking queues.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_in_process_pair();

// Forwards to another transport and keeps a copy of every frame sent or received.
class RecordingTransport final : public Transport {
 public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}

  void send_frame(const std::vector<std::uint8_t>& frame) override;
  std::vector<std::uint8_t> receive_body() override;
  void close() override { inner_.close(); }

  const std::vector<std::vector<std::uint8_t>>& frames() const { return frames_; }

 private:
  Transport& inner_;
  std::vector<std::vector<std::uint8_t>> frames_;
};

std::unique_ptr<Transport> tcp_connect(const std::string& host, std::uint16_t port);

// Accept loop with one thread per connection.
class TcpServer {
 public:
  using Handler = std::function<void(Transport&)>;

  TcpServer(const std::string& bind_addr, std::uint16_t port);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const;
  // Blocks until stop() or until max_connections sessions have finished.
  void run(Handler handler, std::optional<std::size_t> max_connections = std::nullopt);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qfactory
