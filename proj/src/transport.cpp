#include "nbsel/transport.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <fmt/format.h>

#include "text_util.hpp"

namespace nbsel::wire {

namespace {

using Clock = std::chrono::steady_clock;

std::string sys_error(std::string_view what) {
  return fmt::format("{}: {}", what, std::strerror(errno));
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

void wait_for(int fd, short events, Clock::time_point deadline, std::string_view what) {
  for (;;) {
    pollfd p{fd, events, 0};
    const int rc = ::poll(&p, 1, remaining_ms(deadline));
    if (rc > 0) return;
    if (rc == 0) throw TimeoutError(fmt::format("timed out waiting to {}", what));
    if (errno != EINTR) throw WireError(sys_error("poll"));
  }
}

sockaddr_un unix_addr(const std::string& path) {
  sockaddr_un sa{};
  sa.sun_family = AF_UNIX;
  if (path.size() >= sizeof(sa.sun_path)) throw WireError("unix socket path too long: " + path);
  std::memcpy(sa.sun_path, path.c_str(), path.size() + 1);
  return sa;
}

sockaddr_in tcp_addr(const Address& a) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(static_cast<std::uint16_t>(a.port));
  const std::string host = a.host == "localhost" ? "127.0.0.1" : a.host;
  if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
    throw WireError("not an IPv4 address: " + a.host);
  }
  return sa;
}

}  // namespace

Address Address::parse(std::string_view text) {
  Address a;
  if (text.starts_with("unix:")) {
    a.is_unix = true;
    a.path = std::string(text.substr(5));
    if (a.path.empty()) throw WireError("empty unix socket path");
    return a;
  }
  if (text.starts_with("tcp:")) text.remove_prefix(4);
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw WireError("address '" + std::string(text) + "' is neither unix:PATH nor HOST:PORT");
  }
  a.host = std::string(text.substr(0, colon));
  const auto port = detail::parse_number<int>(text.substr(colon + 1));
  if (!port || *port < 0 || *port > 65535) throw WireError("bad port in '" + std::string(text) + "'");
  a.port = *port;
  if (a.host.empty()) a.host = "127.0.0.1";
  return a;
}

std::string Address::to_string() const {
  return is_unix ? "unix:" + path : fmt::format("tcp:{}:{}", host, port);
}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

Connection::~Connection() { close(); }

void Connection::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

Connection Connection::connect(const Address& address, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  // The agent may still be starting up, so refused connections are retried.
  for (;;) {
    const int fd = ::socket(address.is_unix ? AF_UNIX : AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0) throw WireError(sys_error("socket"));
    int rc;
    if (address.is_unix) {
      const auto sa = unix_addr(address.path);
      rc = ::connect(fd, reinterpret_cast<const sockaddr*>(&sa), sizeof sa);
    } else {
      const auto sa = tcp_addr(address);
      rc = ::connect(fd, reinterpret_cast<const sockaddr*>(&sa), sizeof sa);
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    }
    if (rc == 0) return Connection(fd);
    const int err = errno;
    ::close(fd);
    if ((err != ECONNREFUSED && err != ENOENT) || Clock::now() >= deadline) {
      errno = err;
      throw WireError(sys_error("connect to " + address.to_string()));
    }
    ::usleep(20000);
  }
}

void Connection::send_frame(std::string_view payload) {
  if (fd_ < 0) throw WireError("send on a closed connection");
  const std::string data = frame(payload);
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WireError(sys_error("send"));
    }
    off += static_cast<std::size_t>(n);
  }
}

void Connection::read_exact(char* buf, std::size_t n, Clock::time_point deadline) {
  std::size_t got = 0;
  while (got < n) {
    wait_for(fd_, POLLIN, deadline, "receive a reply");
    const ssize_t r = ::recv(fd_, buf + got, n - got, 0);
    if (r == 0) throw WireError("peer closed the connection");
    if (r < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw WireError(sys_error("recv"));
    }
    got += static_cast<std::size_t>(r);
  }
}

std::string Connection::receive_frame(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw WireError("receive on a closed connection");
  const auto deadline = Clock::now() + timeout;
  unsigned char header[4];
  read_exact(reinterpret_cast<char*>(header), 4, deadline);
  const std::uint32_t len = read_length_prefix(header);
  if (len > kMaxFrameBytes) throw WireError(fmt::format("frame of {} bytes exceeds the limit", len));
  std::string payload(len, '\0');
  read_exact(payload.data(), len, deadline);
  return payload;
}

void Connection::send(const Message& m) { send_frame(encode(m)); }

Message Connection::receive(std::chrono::milliseconds timeout) {
  return decode(receive_frame(timeout));
}

Listener::Listener(const Address& address) : address_(address) {
  fd_ = ::socket(address.is_unix ? AF_UNIX : AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw WireError(sys_error("socket"));
  int rc;
  if (address.is_unix) {
    ::unlink(address.path.c_str());
    const auto sa = unix_addr(address.path);
    rc = ::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof sa);
  } else {
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    const auto sa = tcp_addr(address);
    rc = ::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof sa);
  }
  if (rc != 0 || ::listen(fd_, 4) != 0) {
    const std::string msg = sys_error("bind/listen on " + address.to_string());
    ::close(fd_);
    fd_ = -1;
    throw WireError(msg);
  }
  if (!address.is_unix) {
    sockaddr_in sa{};
    socklen_t len = sizeof sa;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len);
    address_.port = ntohs(sa.sin_port);
  }
}

Listener::Listener(Listener&& other) noexcept : fd_(other.fd_), address_(other.address_) {
  other.fd_ = -1;
}

Listener::~Listener() {
  if (fd_ >= 0) {
    ::close(fd_);
    if (address_.is_unix) ::unlink(address_.path.c_str());
  }
}

Connection Listener::accept(std::chrono::milliseconds timeout) {
  wait_for(fd_, POLLIN, Clock::now() + timeout, "accept a connection");
  const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) throw WireError(sys_error("accept"));
  if (!address_.is_unix) {
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  }
  return Connection(fd);
}

}  // namespace nbsel::wire
