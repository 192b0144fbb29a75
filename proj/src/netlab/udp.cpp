#include "twtt/netlab/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <system_error>

namespace twtt::netlab {

namespace {

sockaddr_in to_sockaddr(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host == "localhost" ? "127.0.0.1" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::invalid_argument("invalid IPv4 address '" + ep.host + "'");
  }
  return addr;
}

Endpoint from_sockaddr(const sockaddr_in& addr) {
  char buf[INET_ADDRSTRLEN] = {};
  inet_ntop(AF_INET, &addr.sin_addr, buf, sizeof(buf));
  return {buf, ntohs(addr.sin_port)};
}

[[noreturn]] void fail(const char* what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

std::string Endpoint::to_string() const {
  return host + ":" + std::to_string(port);
}

Endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw std::invalid_argument("endpoint '" + text + "' is not host:port");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != port.size() || value > 65535) {
    throw std::invalid_argument("endpoint '" + text + "' has an invalid port");
  }
  ep.port = static_cast<std::uint16_t>(value);
  to_sockaddr(ep);  // validates the host
  return ep;
}

UdpSocket UdpSocket::bind(const Endpoint& local) {
  const sockaddr_in addr = to_sockaddr(local);
  const int fd = ::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0);
  if (fd < 0) fail("socket");
  UdpSocket sock(fd);
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    fail(("bind " + local.to_string()).c_str());
  }
  return sock;
}

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

Endpoint UdpSocket::local_endpoint() const {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    fail("getsockname");
  }
  return from_sockaddr(addr);
}

void UdpSocket::send_to(std::span<const std::uint8_t> bytes, const Endpoint& to) {
  const sockaddr_in addr = to_sockaddr(to);
  const ssize_t n = ::sendto(fd_, bytes.data(), bytes.size(), 0,
                             reinterpret_cast<const sockaddr*>(&addr), sizeof(addr));
  if (n < 0) fail("sendto");
}

std::optional<Received> UdpSocket::receive(std::chrono::milliseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready < 0) {
    if (errno == EINTR) return std::nullopt;
    fail("poll");
  }
  if (ready == 0) return std::nullopt;

  Received r;
  r.bytes.resize(2048);
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  const ssize_t n = ::recvfrom(fd_, r.bytes.data(), r.bytes.size(), 0,
                               reinterpret_cast<sockaddr*>(&addr), &len);
  if (n < 0) {
    // ICMP port-unreachable from an earlier send surfaces here on Linux.
    if (errno == ECONNREFUSED || errno == EINTR || errno == EAGAIN) return std::nullopt;
    fail("recvfrom");
  }
  r.bytes.resize(static_cast<std::size_t>(n));
  r.from = from_sockaddr(addr);
  return r;
}

}  // namespace twtt::netlab
