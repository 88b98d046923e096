#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "nbsel/wire.hpp"

namespace nbsel::wire {

/// No reply within the allotted time.
class TimeoutError : public WireError {
 public:
  using WireError::WireError;
};

/// "unix:/path/to/socket", "tcp:host:port" or "host:port" (loopback TCP).
struct Address {
  bool is_unix = false;
  std::string path;  // unix
  std::string host;  // tcp
  int port = 0;

  static Address parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;
};

/// A connected stream socket carrying length-prefixed frames.
class Connection {
 public:
  Connection() = default;
  explicit Connection(int fd) : fd_(fd) {}
  Connection(Connection&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  ~Connection();

  static Connection connect(const Address& address, std::chrono::milliseconds timeout);

  void send(const Message& m);
  /// Blocks until a full frame arrives; throws TimeoutError after `timeout`.
  Message receive(std::chrono::milliseconds timeout);
  void send_frame(std::string_view payload);
  std::string receive_frame(std::chrono::milliseconds timeout);

  [[nodiscard]] bool is_open() const { return fd_ >= 0; }
  void close();

 private:
  void read_exact(char* buf, std::size_t n, std::chrono::steady_clock::time_point deadline);
  int fd_ = -1;
};

class Listener {
 public:
  /// Port 0 binds an ephemeral port; see address() for the result.
  explicit Listener(const Address& address);
  Listener(Listener&& other) noexcept;
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  Connection accept(std::chrono::milliseconds timeout);
  [[nodiscard]] const Address& address() const { return address_; }

 private:
  int fd_ = -1;
  Address address_;
};

}  // namespace nbsel::wire
