/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ebpfsim/core/event_log.hpp"
#include "ebpfsim/kernel/kernel.hpp"
#include "ebpfsim/upf/pipeline.hpp"
#include "ebpfsim/upf/traffic.hpp"

namespace ebpfsim::upf {

struct VerdictCounters {
  std::uint64_t pass = 0;
  std::uint64_t drop = 0;
  std::uint64_t redirect = 0;
  std::uint64_t total() const { return pass + drop + redirect; }
};

struct VerdictRecord {
  Tick tick = 0;
  ContainerId upf;
  std::uint64_t n = 0;  // per-plane packet sequence number
  Direction direction = Direction::Uplink;
  std::string slice;
  std::uint32_t teid = 0;
  VerdictKind kind = VerdictKind::Drop;
  std::string peer;
  std::string reason;
  std::uint64_t payload_digest = 0;

  std::string to_line() const;
};

/// The modeled N3/N4/N6 network: one XDP pipeline per UPF container plus
/// the links the simulated kernel's sendmsg() reaches. Interfaces: "n4"
/// installs the next planned sessions on the peer UPF, "n3" sends uplink
/// GTP-U packets to it and "n6" sends downlink packets.
class UserPlane final : public kernel::NetworkFabric {
 public:
  explicit UserPlane(EventLog *log = nullptr) : log_(log) {}

  void add_upf(const ContainerId &id);
  bool is_upf(const ContainerId &id) const { return pipelines_.contains(id); }
  std::vector<ContainerId> upfs() const;

  Expected<void, InstallError> install_session(const ContainerId &upf, const PfcpSession &s);
  Expected<void, InstallError> remove_session(const ContainerId &upf, std::uint32_t teid);
  const XdpPipeline *pipeline(const ContainerId &upf) const;

  void attach(const ContainerId &upf);
  bool attached(const ContainerId &upf) const;

  /// Without an attached XDP program packets fall through to the host stack
  /// (Pass).
  XdpVerdict xdp_ingress(const ContainerId &upf, const GtpPacket &pkt, Tick tick = 0);

  VerdictCounters counters(const ContainerId &upf) const;
  void set_record_verdicts(bool on) { record_ = on; }
  const std::vector<VerdictRecord> &verdicts() const { return verdicts_; }
  std::string verdict_log() const;

  void set_traffic(std::unique_ptr<TrafficGenerator> gen) { traffic_ = std::move(gen); }
  TrafficGenerator *traffic() { return traffic_.get(); }
  const TrafficGenerator *traffic() const { return traffic_.get(); }

  std::int64_t deliver(const kernel::NetMessage &msg) override;
  bool attach_xdp(const kernel::Container &owner, const std::string &program) override;

 private:
  struct Upf {
    XdpPipeline pipeline;
    bool attached = false;
    VerdictCounters counters;
  };

  EventLog *log_;
  std::map<ContainerId, Upf> pipelines_;
  std::unique_ptr<TrafficGenerator> traffic_;
  bool record_ = true;
  std::vector<VerdictRecord> verdicts_;
  std::uint64_t packet_seq_ = 0;
};

}  // namespace ebpfsim::upf
