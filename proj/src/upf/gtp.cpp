/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/upf/gtp.hpp"

namespace ebpfsim::upf {

std::string_view to_string(Direction d) { return d == Direction::Uplink ? "ul" : "dl"; }

std::string_view to_string(GtpError e) {
  switch (e) {
    case GtpError::Truncated: return "truncated";
    case GtpError::BadVersion: return "bad-version";
    case GtpError::UnsupportedFlags: return "unsupported-flags";
    case GtpError::LengthMismatch: return "length-mismatch";
    case GtpError::UnsupportedMessage: return "unsupported-message";
    case GtpError::ZeroTeid: return "zero-teid";
    case GtpError::EmptyPayload: return "empty-payload";
  }
  return "?";
}

void put_be32(Bytes &out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::uint32_t get_be32(std::string_view in) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | static_cast<std::uint8_t>(in[i]);
  return v;
}

Bytes encode_gtpu(const GtpHeader &h, std::string_view payload) {
  Bytes out;
  out.reserve(kGtpHeaderSize + payload.size());
  out.push_back(static_cast<char>(h.flags));
  out.push_back(static_cast<char>(h.msg_type));
  out.push_back(static_cast<char>(h.length >> 8));
  out.push_back(static_cast<char>(h.length & 0xff));
  put_be32(out, h.teid);
  out.append(payload);
  return out;
}

Bytes encode_gpdu(std::uint32_t teid, std::string_view payload) {
  return encode_gtpu(GtpHeader{kGtpFlagsV1, kGtpMsgGpdu, static_cast<std::uint16_t>(payload.size()), teid},
                     payload);
}

Expected<ParsedGtp, GtpError> parse_gtpu(std::string_view wire) {
  if (wire.size() < kGtpHeaderSize) return unexpected(GtpError::Truncated);
  ParsedGtp out;
  auto &h = out.header;
  h.flags = static_cast<std::uint8_t>(wire[0]);
  h.msg_type = static_cast<std::uint8_t>(wire[1]);
  h.length = static_cast<std::uint16_t>((static_cast<std::uint8_t>(wire[2]) << 8) |
                                        static_cast<std::uint8_t>(wire[3]));
  h.teid = get_be32(wire.substr(4));

  if ((h.flags >> 5) != 1 || (h.flags & 0x10) == 0) return unexpected(GtpError::BadVersion);
  if ((h.flags & 0x07) != 0) return unexpected(GtpError::UnsupportedFlags);
  if (h.length != wire.size() - kGtpHeaderSize) return unexpected(GtpError::LengthMismatch);
  out.payload = wire.substr(kGtpHeaderSize);
  if (h.msg_type == kGtpMsgEchoRequest) {
    out.echo = true;
    return out;
  }
  if (h.msg_type != kGtpMsgGpdu) return unexpected(GtpError::UnsupportedMessage);
  if (h.teid == 0) return unexpected(GtpError::ZeroTeid);
  if (out.payload.empty()) return unexpected(GtpError::EmptyPayload);
  return out;
}

Bytes encode_downlink(std::uint32_t ue_addr, std::string_view payload) {
  Bytes out;
  put_be32(out, ue_addr);
  out.append(payload);
  return out;
}

}  // namespace ebpfsim::upf
