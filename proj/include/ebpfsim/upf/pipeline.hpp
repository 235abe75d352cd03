/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/core/types.hpp"
#include "ebpfsim/upf/gtp.hpp"

namespace ebpfsim::upf {

enum class SessionAction { Forward, Drop };
std::string_view to_string(SessionAction a);

/// A forwarding rule as installed over N4.
struct PfcpSession {
  std::uint64_t seid = 0;
  std::uint32_t teid = 0;
  SessionAction action = SessionAction::Forward;
  std::string peer;                 // N6 data network for Forward
  ContainerId upf;
  std::uint32_t ue_addr = 0;        // downlink classifier; 0 = uplink only
  std::string access_peer = "gnb";  // N3 next hop for downlink
};

enum class InstallError { NotUpf, DuplicateTeid, ZeroTeid, DuplicateUeAddr, UnknownSession };
std::string_view to_string(InstallError e);

enum class VerdictKind { Pass, Drop, Redirect };
std::string_view to_string(VerdictKind k);

struct XdpVerdict {
  VerdictKind kind = VerdictKind::Drop;
  std::string peer;         // Redirect target
  Bytes payload;            // Redirect payload
  std::string_view reason;  // why Pass/Drop, empty on Redirect
};

/// Per-UPF XDP program logic: GTP-U parse, TEID lookup, forward.
class XdpPipeline {
 public:
  Expected<void, InstallError> install(const PfcpSession &s);
  Expected<void, InstallError> remove(std::uint32_t teid);
  const PfcpSession *find(std::uint32_t teid) const;
  std::size_t size() const { return sessions_.size(); }
  std::vector<PfcpSession> sessions() const;

  /// Uplink frames arrive on N3 as GTP-U, downlink frames on N6 as raw
  /// payloads prefixed with the UE address.
  XdpVerdict process(std::string_view wire, Direction ingress) const;

 private:
  std::unordered_map<std::uint32_t, PfcpSession> sessions_;
  std::unordered_map<std::uint32_t, std::uint32_t> by_ue_;  // ue_addr -> teid
};

}  // namespace ebpfsim::upf
