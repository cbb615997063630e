#include "opgt/link.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>

#include "opgt/error.hpp"

namespace opgt {
namespace {

static_assert(std::endian::native == std::endian::little,
              "wire codec assumes a little-endian host");

std::array<std::uint32_t, 256> makeCrcTable() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) {
      c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    }
    table[i] = c;
  }
  return table;
}

const std::array<std::uint32_t, 256> kCrcTable = makeCrcTable();

void putU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void putF64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

std::uint32_t getU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

double getF64(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 4;  // magic, version, type, length
constexpr std::size_t kTrailerBytes = 4;             // crc32
constexpr std::size_t kTelemetryPayloadBytes = 4 + 4 * 8;

}  // namespace

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t len) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i) {
    c = kCrcTable[(c ^ data[i]) & 0xFF] ^ (c >> 8);
  }
  return c ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> encode(const Message& msg) {
  std::vector<std::uint8_t> payload;
  std::uint8_t type = 0;
  if (const auto* t = std::get_if<TelemetryMessage>(&msg)) {
    type = kTypeTelemetry;
    putU32(payload, t->sequence);
    putF64(payload, t->t_s);
    putF64(payload, t->position.latitude_deg);
    putF64(payload, t->position.longitude_deg);
    putF64(payload, t->position.altitude_m);
  } else {
    const auto& c = std::get<CorrectionMessage>(msg);
    if (c.payload.size() + 4 > kMaxPayloadBytes) {
      throw Error("encode: correction payload exceeds the frame size limit");
    }
    type = kTypeCorrection;
    putU32(payload, c.sequence);
    payload.insert(payload.end(), c.payload.begin(), c.payload.end());
  }

  std::vector<std::uint8_t> frame;
  frame.reserve(kHeaderBytes + payload.size() + kTrailerBytes);
  for (std::uint8_t b : kProtocolMagic) frame.push_back(b);
  frame.push_back(kProtocolVersion);
  frame.push_back(type);
  putU32(frame, static_cast<std::uint32_t>(payload.size()));
  for (std::uint8_t b : payload) frame.push_back(b);
  // checksum covers type + length + payload
  const std::uint32_t crc = crc32_ieee(frame.data() + 5, 5 + payload.size());
  putU32(frame, crc);
  return frame;
}

DecodeResult decode(const std::uint8_t* data, std::size_t len) {
  DecodeResult out;
  if (len < 4) {
    out.status = len == 0 ? DecodeStatus::NotAFrame : DecodeStatus::IncompleteFrame;
    if (len > 0 && !std::equal(data, data + len, kProtocolMagic)) {
      out.status = DecodeStatus::NotAFrame;
    }
    return out;
  }
  if (!std::equal(std::begin(kProtocolMagic), std::end(kProtocolMagic), data)) {
    out.status = DecodeStatus::NotAFrame;
    return out;
  }
  if (len < kHeaderBytes) {
    out.status = DecodeStatus::IncompleteFrame;
    return out;
  }
  const std::uint8_t version = data[4];
  const std::uint8_t type = data[5];
  const std::uint32_t payload_len = getU32(data + 6);
  if (version != kProtocolVersion || payload_len > kMaxPayloadBytes ||
      (type != kTypeTelemetry && type != kTypeCorrection)) {
    out.status = DecodeStatus::CorruptFrame;
    return out;
  }
  const std::size_t total = kHeaderBytes + payload_len + kTrailerBytes;
  if (len < total) {
    out.status = DecodeStatus::IncompleteFrame;
    return out;
  }
  const std::uint32_t crc = getU32(data + kHeaderBytes + payload_len);
  if (crc != crc32_ieee(data + 5, 5 + payload_len)) {
    out.status = DecodeStatus::CorruptFrame;
    return out;
  }
  const std::uint8_t* payload = data + kHeaderBytes;
  if (type == kTypeTelemetry) {
    if (payload_len != kTelemetryPayloadBytes) {
      out.status = DecodeStatus::CorruptFrame;
      return out;
    }
    TelemetryMessage t;
    t.sequence = getU32(payload);
    t.t_s = getF64(payload + 4);
    t.position.latitude_deg = getF64(payload + 12);
    t.position.longitude_deg = getF64(payload + 20);
    t.position.altitude_m = getF64(payload + 28);
    out.message = t;
  } else {
    if (payload_len < 4) {
      out.status = DecodeStatus::CorruptFrame;
      return out;
    }
    CorrectionMessage c;
    c.sequence = getU32(payload);
    c.payload.assign(payload + 4, payload + payload_len);
    out.message = c;
  }
  out.status = DecodeStatus::Ok;
  out.consumed = total;
  return out;
}

DecodeResult decode(const std::vector<std::uint8_t>& bytes) {
  return decode(bytes.data(), bytes.size());
}

void Channel::send(const Message& msg, double now_s, const LinkParams& params,
                   std::mt19937_64& rng) {
  if (params.drop_probability > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < params.drop_probability) return;
  }
  double delay = params.latency_s;
  if (params.jitter_sd_s > 0.0) {
    std::normal_distribution<double> jitter(0.0, params.jitter_sd_s);
    delay += jitter(rng);
  }
  // FIFO per sender: a later send never arrives before an earlier survivor
  double delivery = std::max(now_s + std::max(delay, 0.0), last_scheduled_t_);
  last_scheduled_t_ = delivery;
  queue_.push_back({delivery, msg});
}

std::vector<Message> Channel::deliver(double now_s) {
  std::vector<Message> out;
  while (!queue_.empty() && queue_.front().delivery_t <= now_s) {
    out.push_back(std::move(queue_.front().msg));
    queue_.pop_front();
  }
  return out;
}

}  // namespace opgt
