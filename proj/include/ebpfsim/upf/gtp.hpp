/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/core/types.hpp"

namespace ebpfsim::upf {

inline constexpr std::size_t kGtpHeaderSize = 8;
inline constexpr std::uint8_t kGtpFlagsV1 = 0x30;  // version 1, PT=1, no E/S/PN
inline constexpr std::uint8_t kGtpMsgEchoRequest = 0x01;
inline constexpr std::uint8_t kGtpMsgGpdu = 0xff;

/// Downlink frames start with the destination UE address (big endian).
inline constexpr std::size_t kUeAddrSize = 4;

enum class Direction { Uplink, Downlink };
std::string_view to_string(Direction d);

/// A packet as it arrives at a UPF. `wire` is what the pipeline parses; the
/// remaining fields are ground truth kept for auditing and never read by it.
struct GtpPacket {
  std::string outer_src;
  std::string outer_dst;
  std::uint32_t teid = 0;
  Bytes inner_payload;
  Direction direction = Direction::Uplink;
  std::string slice;
  Bytes wire;
};

enum class GtpError {
  Truncated,
  BadVersion,
  UnsupportedFlags,
  LengthMismatch,
  UnsupportedMessage,
  ZeroTeid,
  EmptyPayload,
};
std::string_view to_string(GtpError e);

struct GtpHeader {
  std::uint8_t flags = kGtpFlagsV1;
  std::uint8_t msg_type = kGtpMsgGpdu;
  std::uint16_t length = 0;
  std::uint32_t teid = 0;
};

struct ParsedGtp {
  GtpHeader header;
  std::string_view payload;
  bool echo = false;
};

Bytes encode_gtpu(const GtpHeader &h, std::string_view payload);
/// G-PDU with the correct length field.
Bytes encode_gpdu(std::uint32_t teid, std::string_view payload);

/// Parses the 8-byte mandatory header. Echo requests are reported as such;
/// every other message type, optional-field flag, or inconsistent length is an
/// error.
Expected<ParsedGtp, GtpError> parse_gtpu(std::string_view wire);

Bytes encode_downlink(std::uint32_t ue_addr, std::string_view payload);

void put_be32(Bytes &out, std::uint32_t v);
std::uint32_t get_be32(std::string_view in);

}  // namespace ebpfsim::upf
