#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace twtt::netlab {

// Datagram layout, all multi-byte fields big-endian:
//   0  magic "TWTT"      4 bytes
//   4  version (=1)      1
//   5  msg_type          1   1 = PPS, 2 = REPORT
//   6  node_id           1   0 = A (remote), 1 = B (local)
//   7  epoch_index       4   unsigned
//  11  payload_ps        8   signed picoseconds
//  19  CRC-32            4   over bytes 0..18
inline constexpr std::size_t kMessageSize = 23;
inline constexpr std::uint8_t kVersion = 1;

enum class MsgType : std::uint8_t { kPps = 1, kReport = 2 };
enum class NodeId : std::uint8_t { kRemote = 0, kLocal = 1 };

// PPS payload: emission time of the pulse relative to the nominal epoch
// instant, plus any transit delay the proxy has added. REPORT payload: the
// PPS payload as it reached the remote node.
struct PpsMessage {
  MsgType msg_type = MsgType::kPps;
  NodeId node_id = NodeId::kRemote;
  std::uint32_t epoch_index = 0;
  std::int64_t payload_ps = 0;

  bool operator==(const PpsMessage&) const = default;
};

using Datagram = std::array<std::uint8_t, kMessageSize>;

enum class DecodeErrorKind {
  kWrongLength,
  kBadMagic,
  kBadChecksum,
  kUnknownVersion,
  kUnknownType,
  kUnknownNode,
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  DecodeErrorKind kind() const { return kind_; }

 private:
  DecodeErrorKind kind_;
};

Datagram encode(const PpsMessage& msg);

// Checks length, magic, checksum, version, type and node id in that order.
PpsMessage decode(std::span<const std::uint8_t> bytes);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace twtt::netlab
