/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/upf/pipeline.hpp"

#include <algorithm>

namespace ebpfsim::upf {

std::string_view to_string(SessionAction a) { return a == SessionAction::Forward ? "forward" : "drop"; }

std::string_view to_string(InstallError e) {
  switch (e) {
    case InstallError::NotUpf: return "NotUpf";
    case InstallError::DuplicateTeid: return "DuplicateTeid";
    case InstallError::ZeroTeid: return "ZeroTeid";
    case InstallError::DuplicateUeAddr: return "DuplicateUeAddr";
    case InstallError::UnknownSession: return "UnknownSession";
  }
  return "?";
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Pass: return "Pass";
    case VerdictKind::Drop: return "Drop";
    case VerdictKind::Redirect: return "Redirect";
  }
  return "?";
}

Expected<void, InstallError> XdpPipeline::install(const PfcpSession &s) {
  if (s.teid == 0) return unexpected(InstallError::ZeroTeid);
  if (sessions_.contains(s.teid)) return unexpected(InstallError::DuplicateTeid);
  if (s.ue_addr != 0) {
    if (by_ue_.contains(s.ue_addr)) return unexpected(InstallError::DuplicateUeAddr);
    by_ue_[s.ue_addr] = s.teid;
  }
  sessions_.emplace(s.teid, s);
  return {};
}

Expected<void, InstallError> XdpPipeline::remove(std::uint32_t teid) {
  auto it = sessions_.find(teid);
  if (it == sessions_.end()) return unexpected(InstallError::UnknownSession);
  if (it->second.ue_addr != 0) by_ue_.erase(it->second.ue_addr);
  sessions_.erase(it);
  return {};
}

const PfcpSession *XdpPipeline::find(std::uint32_t teid) const {
  auto it = sessions_.find(teid);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::vector<PfcpSession> XdpPipeline::sessions() const {
  std::vector<PfcpSession> out;
  out.reserve(sessions_.size());
  for (const auto &[teid, s] : sessions_) out.push_back(s);
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.teid < b.teid; });
  return out;
}

XdpVerdict XdpPipeline::process(std::string_view wire, Direction ingress) const {
  if (ingress == Direction::Downlink) {
    if (wire.size() <= kUeAddrSize) return {VerdictKind::Drop, {}, {}, "truncated"};
    auto ue = by_ue_.find(get_be32(wire));
    if (ue == by_ue_.end()) return {VerdictKind::Drop, {}, {}, "no-session"};
    const auto &s = sessions_.at(ue->second);
    if (s.action == SessionAction::Drop) return {VerdictKind::Drop, {}, {}, "rule-drop"};
    return {VerdictKind::Redirect, s.access_peer, encode_gpdu(s.teid, wire), {}};
  }

  auto parsed = parse_gtpu(wire);
  if (!parsed) return {VerdictKind::Drop, {}, {}, to_string(parsed.error())};
  // Path management traffic goes up to the host stack.
  if (parsed->echo) return {VerdictKind::Pass, {}, {}, "echo"};
  const auto *s = find(parsed->header.teid);
  if (s == nullptr) return {VerdictKind::Drop, {}, {}, "no-session"};
  if (s->action == SessionAction::Drop) return {VerdictKind::Drop, {}, {}, "rule-drop"};
  return {VerdictKind::Redirect, s->peer, Bytes(parsed->payload), {}};
}

}  // namespace ebpfsim::upf
