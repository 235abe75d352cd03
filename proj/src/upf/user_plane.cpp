/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/upf/user_plane.hpp"

#include "ebpfsim/core/util.hpp"

namespace ebpfsim::upf {

std::string VerdictRecord::to_line() const {
  OrderedJson j;
  j["tick"] = tick;
  j["upf"] = upf;
  j["n"] = n;
  j["dir"] = std::string(to_string(direction));
  j["slice"] = slice;
  j["teid"] = teid;
  j["verdict"] = std::string(to_string(kind));
  if (!peer.empty()) j["peer"] = peer;
  if (!reason.empty()) j["reason"] = reason;
  if (kind == VerdictKind::Redirect) j["payload"] = hex64(payload_digest);
  return dump_compact(j);
}

void UserPlane::add_upf(const ContainerId &id) { pipelines_.try_emplace(id); }

std::vector<ContainerId> UserPlane::upfs() const {
  std::vector<ContainerId> out;
  for (const auto &[id, u] : pipelines_) out.push_back(id);
  return out;
}

Expected<void, InstallError> UserPlane::install_session(const ContainerId &upf, const PfcpSession &s) {
  auto it = pipelines_.find(upf);
  if (it == pipelines_.end()) return unexpected(InstallError::NotUpf);
  PfcpSession copy = s;
  copy.upf = upf;
  return it->second.pipeline.install(copy);
}

Expected<void, InstallError> UserPlane::remove_session(const ContainerId &upf, std::uint32_t teid) {
  auto it = pipelines_.find(upf);
  if (it == pipelines_.end()) return unexpected(InstallError::NotUpf);
  return it->second.pipeline.remove(teid);
}

const XdpPipeline *UserPlane::pipeline(const ContainerId &upf) const {
  auto it = pipelines_.find(upf);
  return it == pipelines_.end() ? nullptr : &it->second.pipeline;
}

void UserPlane::attach(const ContainerId &upf) {
  if (auto it = pipelines_.find(upf); it != pipelines_.end()) it->second.attached = true;
}

bool UserPlane::attached(const ContainerId &upf) const {
  auto it = pipelines_.find(upf);
  return it != pipelines_.end() && it->second.attached;
}

XdpVerdict UserPlane::xdp_ingress(const ContainerId &upf, const GtpPacket &pkt, Tick tick) {
  XdpVerdict v;
  auto it = pipelines_.find(upf);
  if (it == pipelines_.end() || !it->second.attached) {
    v = {VerdictKind::Pass, {}, {}, "no-xdp"};
  } else {
    v = it->second.pipeline.process(pkt.wire, pkt.direction);
  }
  if (it != pipelines_.end()) {
    auto &c = it->second.counters;
    switch (v.kind) {
      case VerdictKind::Pass: ++c.pass; break;
      case VerdictKind::Drop: ++c.drop; break;
      case VerdictKind::Redirect: ++c.redirect; break;
    }
  }
  ++packet_seq_;
  if (record_) {
    verdicts_.push_back(VerdictRecord{tick, upf, packet_seq_, pkt.direction, pkt.slice, pkt.teid, v.kind,
                                      v.peer, std::string(v.reason),
                                      v.kind == VerdictKind::Redirect ? fnv1a64(v.payload) : 0});
  }
  return v;
}

VerdictCounters UserPlane::counters(const ContainerId &upf) const {
  auto it = pipelines_.find(upf);
  return it == pipelines_.end() ? VerdictCounters{} : it->second.counters;
}

std::string UserPlane::verdict_log() const {
  std::string out;
  for (const auto &r : verdicts_) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

std::int64_t UserPlane::deliver(const kernel::NetMessage &msg) {
  if (!is_upf(msg.peer)) return -kernel::kENETUNREACH;
  if (traffic_ == nullptr) return -kernel::kEINVAL;

  if (msg.iface == "n4") {
    std::uint64_t installed = 0;
    OrderedJson errors = OrderedJson::array();
    for (const auto &s : traffic_->take_sessions(msg.peer, msg.count)) {
      if (auto ok = install_session(msg.peer, s); ok) {
        ++installed;
      } else {
        errors.push_back(std::string(to_string(ok.error())));
      }
    }
    if (log_ != nullptr) {
      OrderedJson d;
      d["upf"] = msg.peer;
      d["installed"] = installed;
      d["table"] = pipeline(msg.peer)->size();
      if (!errors.empty()) d["errors"] = errors;
      log_->append(msg.tick, "pfcp_install", msg.sender.value(), msg.container, std::move(d));
    }
    return static_cast<std::int64_t>(installed);
  }

  Direction dir;
  if (msg.iface == "n3") {
    dir = Direction::Uplink;
  } else if (msg.iface == "n6") {
    dir = Direction::Downlink;
  } else {
    return -kernel::kEINVAL;
  }
  const auto before = counters(msg.peer);
  for (std::uint64_t i = 0; i < msg.count; ++i) {
    xdp_ingress(msg.peer, traffic_->next_packet(msg.peer, dir), msg.tick);
  }
  if (log_ != nullptr) {
    const auto after = counters(msg.peer);
    OrderedJson d;
    d["upf"] = msg.peer;
    d["iface"] = msg.iface;
    d["packets"] = msg.count;
    d["pass"] = after.pass - before.pass;
    d["drop"] = after.drop - before.drop;
    d["redirect"] = after.redirect - before.redirect;
    log_->append(msg.tick, "traffic", msg.sender.value(), msg.container, std::move(d));
  }
  return static_cast<std::int64_t>(msg.count);
}

bool UserPlane::attach_xdp(const kernel::Container &owner, const std::string &) {
  if (!is_upf(owner.id)) return false;
  attach(owner.id);
  return true;
}

}  // namespace ebpfsim::upf
