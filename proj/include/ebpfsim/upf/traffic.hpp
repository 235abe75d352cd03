/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ebpfsim/core/util.hpp"
#include "ebpfsim/upf/pipeline.hpp"

namespace ebpfsim::upf {

struct SliceSpec {
  std::string name;  // S-NSSAI tag
  ContainerId upf;
  std::string dn;
};

/// Ratios are per mille of generated packets.
struct TrafficConfig {
  std::uint32_t sessions_per_slice = 32;
  std::uint32_t drop_rule_permille = 100;
  std::uint32_t malformed_permille = 50;
  std::uint32_t unknown_teid_permille = 50;
  std::uint32_t misroute_permille = 50;
  std::uint32_t echo_permille = 10;
  std::uint32_t max_payload = 64;
};

/// Seeded session plan and packet source. Each slice owns a disjoint TEID
/// range, so a TEID identifies its slice.
class TrafficGenerator {
 public:
  TrafficGenerator(TrafficConfig config, std::vector<SliceSpec> slices, std::uint64_t seed);

  const TrafficConfig &config() const { return config_; }
  const std::vector<SliceSpec> &slices() const { return slices_; }
  const SliceSpec *slice_for_upf(const ContainerId &upf) const;

  /// Every session planned for the UPF, in install order.
  const std::vector<PfcpSession> &plan(const ContainerId &upf) const;
  /// Next not-yet-handed-out chunk of the UPF's plan.
  std::vector<PfcpSession> take_sessions(const ContainerId &upf, std::size_t count);

  GtpPacket next_packet(const ContainerId &upf, Direction direction);

  static std::uint32_t teid_range_start(std::size_t slice_index) {
    return (static_cast<std::uint32_t>(slice_index) << 24) | 1;
  }

 private:
  Bytes payload();
  GtpPacket uplink(const SliceSpec &s, std::size_t slice_index);
  GtpPacket downlink(const SliceSpec &s, std::size_t slice_index);
  const PfcpSession &pick(std::size_t slice_index);

  TrafficConfig config_;
  std::vector<SliceSpec> slices_;
  DeterministicRng rng_;
  std::vector<std::vector<PfcpSession>> plans_;
  std::vector<std::size_t> handed_out_;
  std::uint64_t packet_seq_ = 0;
};

}  // namespace ebpfsim::upf
