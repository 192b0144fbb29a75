#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace twtt::netlab {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  std::string to_string() const;
  bool operator==(const Endpoint&) const = default;
};

// "host:port", IPv4 dotted quad or "localhost".
Endpoint parse_endpoint(const std::string& text);

struct Received {
  std::vector<std::uint8_t> bytes;
  Endpoint from;
};

// Owning IPv4 UDP socket.
class UdpSocket {
 public:
  static UdpSocket bind(const Endpoint& local);

  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;
  ~UdpSocket();

  Endpoint local_endpoint() const;
  void send_to(std::span<const std::uint8_t> bytes, const Endpoint& to);
  // Empty on timeout.
  std::optional<Received> receive(std::chrono::milliseconds timeout);

 private:
  explicit UdpSocket(int fd) : fd_(fd) {}
  int fd_ = -1;
};

}  // namespace twtt::netlab
