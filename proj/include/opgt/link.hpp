#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <variant>
#include <vector>

#include "opgt/geo.hpp"

namespace opgt {

struct TelemetryMessage {
  std::uint32_t sequence = 0;
  double t_s = 0.0;
  GeodeticPosition position;

  bool operator==(const TelemetryMessage&) const = default;
};

// RTK corrections are forwarded opaquely; the payload is never interpreted.
struct CorrectionMessage {
  std::uint32_t sequence = 0;
  std::vector<std::uint8_t> payload;

  bool operator==(const CorrectionMessage&) const = default;
};

using Message = std::variant<TelemetryMessage, CorrectionMessage>;

// Wire frame: magic "OPGT", version u8, type u8, payload length u32 LE,
// payload, CRC-32 (IEEE) over type + length + payload, little-endian fields
// throughout. See docs/protocol.md.
inline constexpr std::uint8_t kProtocolMagic[4] = {0x4F, 0x50, 0x47, 0x54};
inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::uint8_t kTypeTelemetry = 1;
inline constexpr std::uint8_t kTypeCorrection = 2;
inline constexpr std::size_t kMaxPayloadBytes = 65536;

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t len);

// Throws Error when a correction payload exceeds kMaxPayloadBytes.
std::vector<std::uint8_t> encode(const Message& msg);

enum class DecodeStatus {
  Ok,
  NotAFrame,        // bad magic
  CorruptFrame,     // checksum/version/type/length violations
  IncompleteFrame,  // fewer bytes than one whole frame
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::NotAFrame;
  Message message;
  std::size_t consumed = 0;  // bytes of the frame when Ok; unconsumed tail remains
};

DecodeResult decode(const std::uint8_t* data, std::size_t len);
DecodeResult decode(const std::vector<std::uint8_t>& bytes);

struct LinkParams {
  double latency_s = 0.0;
  double jitter_sd_s = 0.0;
  double drop_probability = 0.0;
};

// Event-queue channel model: drops are i.i.d., survivors arrive at
// send + latency + jitter, and deliveries from one sender never reorder.
class Channel {
 public:
  void send(const Message& msg, double now_s, const LinkParams& params,
            std::mt19937_64& rng);

  // Messages whose delivery time has arrived, in delivery order.
  std::vector<Message> deliver(double now_s);

  std::size_t pending() const { return queue_.size(); }

 private:
  struct Entry {
    double delivery_t;
    Message msg;
  };
  std::deque<Entry> queue_;
  double last_scheduled_t_ = -1e300;
};

}  // namespace opgt
