#include "qfactory/transport.hpp"

#include <boost/asio.hpp>

namespace qfactory {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

struct Queue {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> frames;
  bool closed = false;
};

class InProcessTransport final : public Transport {
 public:
  InProcessTransport(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~InProcessTransport() override { close(); }

  void send_frame(const std::vector<std::uint8_t>& frame) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportClosed("peer closed");
    out_->frames.push_back(frame);
    out_->cv.notify_one();
  }

  std::vector<std::uint8_t> receive_body() override {
    std::unique_lock lock(in_->mu);
    in_->cv.wait(lock, [&] { return !in_->frames.empty() || in_->closed; });
    if (in_->frames.empty()) throw TransportClosed("peer closed");
    auto frame = std::move(in_->frames.front());
    in_->frames.pop_front();
    lock.unlock();
    if (frame.size() < 4) throw FrameError("truncated length prefix");
    std::span<const std::uint8_t, 4> prefix(frame.data(), 4);
    auto len = decode_length(prefix);
    if (frame.size() - 4 != len) throw FrameError("frame length mismatch");
    return std::vector<std::uint8_t>(frame.begin() + 4, frame.end());
  }

  void close() override {
    for (auto* q : {in_.get(), out_.get()}) {
      std::lock_guard lock(q->mu);
      q->closed = true;
      q->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Queue> in_;
  std::shared_ptr<Queue> out_;
};

class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(tcp::socket socket) : socket_(std::move(socket)) {
    socket_.set_option(tcp::no_delay(true));
  }
  ~TcpTransport() override { close(); }

  void send_frame(const std::vector<std::uint8_t>& frame) override {
    boost::system::error_code ec;
    asio::write(socket_, asio::buffer(frame), ec);
    if (ec) throw TransportClosed("send failed: " + ec.message());
  }

  std::vector<std::uint8_t> receive_body() override {
    std::array<std::uint8_t, 4> prefix{};
    boost::system::error_code ec;
    std::size_t got = asio::read(socket_, asio::buffer(prefix), ec);
    if (ec) {
      if (got == 0 && ec == asio::error::eof) throw TransportClosed("peer closed");
      throw FrameError("truncated length prefix");
    }
    auto len = decode_length(prefix);
    std::vector<std::uint8_t> body(len);
    asio::read(socket_, asio::buffer(body), ec);
    if (ec) throw FrameError("truncated frame body");
    return body;
  }

  void close() override {
    boost::system::error_code ec;
    if (socket_.is_open()) {
      socket_.shutdown(tcp::socket::shutdown_both, ec);
      socket_.close(ec);
    }
  }

 private:
  tcp::socket socket_;
};

}  // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_in_process_pair() {
  auto a_to_b = std::make_shared<Queue>();
  auto b_to_a = std::make_shared<Queue>();
  return {std::make_unique<InProcessTransport>(b_to_a, a_to_b),
          std::make_unique<InProcessTransport>(a_to_b, b_to_a)};
}

void RecordingTransport::send_frame(const std::vector<std::uint8_t>& frame) {
  frames_.push_back(frame);
  inner_.send_frame(frame);
}

std::vector<std::uint8_t> RecordingTransport::receive_body() {
  auto body = inner_.receive_body();
  frames_.push_back(body);
  return body;
}

std::unique_ptr<Transport> tcp_connect(const std::string& host, std::uint16_t port) {
  // Synchronous sockets only, so one shared io_context suffices.
  static asio::io_context io;
  tcp::resolver resolver(io);
  boost::system::error_code ec;
  auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (ec) throw Error(ErrorCode::kProtocol, "cannot resolve " + host + ": " + ec.message());
  tcp::socket socket(io);
  asio::connect(socket, endpoints, ec);
  if (ec) throw Error(ErrorCode::kProtocol, "cannot connect to " + host + ":" + std::to_string(port) +
                                                ": " + ec.message());
  return std::make_unique<TcpTransport>(std::move(socket));
}

struct TcpServer::Impl {
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::mutex mu;
  std::vector<std::thread> workers;
  std::size_t accepted = 0;
  std::optional<std::size_t> limit;
  Handler handler;

  void start_accept() {
    acceptor.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
      if (ec) return;
      {
        std::lock_guard lock(mu);
        ++accepted;
        workers.emplace_back([this, s = std::move(socket)]() mutable {
          TcpTransport transport(std::move(s));
          try {
            handler(transport);
          } catch (const std::exception&) {
            // One failed session never brings the server down.
          }
        });
      }
      if (limit && accepted >= *limit) {
        boost::system::error_code ignore;
        acceptor.close(ignore);
        return;
      }
      start_accept();
    });
  }
};

TcpServer::TcpServer(const std::string& bind_addr, std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  auto addr = asio::ip::make_address(bind_addr, ec);
  if (ec) throw Error(ErrorCode::kInvalidArgument, "bad bind address '" + bind_addr + "'");
  tcp::endpoint ep(addr, port);
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
  impl_->acceptor.bind(ep, ec);
  if (ec) throw Error(ErrorCode::kProtocol, "bind failed: " + ec.message());
  impl_->acceptor.listen();
}

TcpServer::~TcpServer() {
  stop();
  std::lock_guard lock(impl_->mu);
  for (auto& t : impl_->workers) {
    if (t.joinable()) t.join();
  }
}

std::uint16_t TcpServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void TcpServer::run(Handler handler, std::optional<std::size_t> max_connections) {
  impl_->handler = std::move(handler);
  impl_->limit = max_connections;
  impl_->start_accept();
  impl_->io.run();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(impl_->mu);
    workers.swap(impl_->workers);
  }
  for (auto& t : workers) t.join();
}

void TcpServer::stop() {
  asio::post(impl_->io, [this] {
    boost::system::error_code ignore;
    impl_->acceptor.close(ignore);
  });
}

}  // namespace qfactory
