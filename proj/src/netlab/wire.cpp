#include "twtt/netlab/wire.hpp"

#include <zlib.h>

namespace twtt::netlab {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'T', 'W', 'T', 'T'};

void put_be(std::uint8_t* out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
}

std::uint64_t get_be(const std::uint8_t* in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

Datagram encode(const PpsMessage& msg) {
  Datagram d{};
  std::copy(kMagic.begin(), kMagic.end(), d.begin());
  d[4] = kVersion;
  d[5] = static_cast<std::uint8_t>(msg.msg_type);
  d[6] = static_cast<std::uint8_t>(msg.node_id);
  put_be(&d[7], msg.epoch_index, 4);
  put_be(&d[11], static_cast<std::uint64_t>(msg.payload_ps), 8);
  put_be(&d[19], crc32(std::span(d).first(19)), 4);
  return d;
}

PpsMessage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kMessageSize) {
    throw DecodeError(DecodeErrorKind::kWrongLength,
                      "datagram length " + std::to_string(bytes.size()) +
                          ", expected " + std::to_string(kMessageSize));
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw DecodeError(DecodeErrorKind::kBadMagic, "bad magic");
  }
  if (crc32(bytes.first(19)) != get_be(&bytes[19], 4)) {
    throw DecodeError(DecodeErrorKind::kBadChecksum, "checksum mismatch");
  }
  if (bytes[4] != kVersion) {
    throw DecodeError(DecodeErrorKind::kUnknownVersion,
                      "unknown version " + std::to_string(bytes[4]));
  }
  PpsMessage msg;
  if (bytes[5] != 1 && bytes[5] != 2) {
    throw DecodeError(DecodeErrorKind::kUnknownType,
                      "unknown message type " + std::to_string(bytes[5]));
  }
  if (bytes[6] > 1) {
    throw DecodeError(DecodeErrorKind::kUnknownNode,
                      "unknown node id " + std::to_string(bytes[6]));
  }
  msg.msg_type = static_cast<MsgType>(bytes[5]);
  msg.node_id = static_cast<NodeId>(bytes[6]);
  msg.epoch_index = static_cast<std::uint32_t>(get_be(&bytes[7], 4));
  msg.payload_ps = static_cast<std::int64_t>(get_be(&bytes[11], 8));
  return msg;
}

}  // namespace twtt::netlab
