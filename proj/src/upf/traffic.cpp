/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/upf/traffic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ebpfsim::upf {
namespace {

constexpr std::uint32_t kSliceSpan = 1U << 24;
constexpr std::uint32_t kUnknownTeidBase = 0xf0000000U;

const std::vector<PfcpSession> kNoSessions;

}  // namespace

TrafficGenerator::TrafficGenerator(TrafficConfig config, std::vector<SliceSpec> slices, std::uint64_t seed)
    : config_(config), slices_(std::move(slices)), rng_(seed) {
  if (slices_.size() > 0xf0) throw std::invalid_argument("too many slices");
  if (config_.sessions_per_slice >= kSliceSpan / 2) throw std::invalid_argument("too many sessions per slice");
  std::uint64_t seid = 1;
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    std::vector<PfcpSession> plan;
    std::set<std::uint32_t> used;
    while (plan.size() < config_.sessions_per_slice) {
      const auto teid = teid_range_start(i) + static_cast<std::uint32_t>(rng_.below(kSliceSpan - 1));
      if (!used.insert(teid).second) continue;
      PfcpSession s;
      s.seid = seid++;
      s.teid = teid;
      s.upf = slices_[i].upf;
      s.peer = slices_[i].dn;
      s.action = rng_.chance(config_.drop_rule_permille, 1000) ? SessionAction::Drop : SessionAction::Forward;
      // 10.<slice>.x.y, unique per session.
      s.ue_addr = 0x0a000000U | (static_cast<std::uint32_t>(i) << 16) | static_cast<std::uint32_t>(plan.size() + 1);
      plan.push_back(std::move(s));
    }
    plans_.push_back(std::move(plan));
  }
  handed_out_.assign(slices_.size(), 0);
}

const SliceSpec *TrafficGenerator::slice_for_upf(const ContainerId &upf) const {
  for (const auto &s : slices_) {
    if (s.upf == upf) return &s;
  }
  return nullptr;
}

const std::vector<PfcpSession> &TrafficGenerator::plan(const ContainerId &upf) const {
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    if (slices_[i].upf == upf) return plans_[i];
  }
  return kNoSessions;
}

std::vector<PfcpSession> TrafficGenerator::take_sessions(const ContainerId &upf, std::size_t count) {
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    if (slices_[i].upf != upf) continue;
    const auto begin = handed_out_[i];
    const auto end = std::min(plans_[i].size(), begin + count);
    handed_out_[i] = end;
    return {plans_[i].begin() + static_cast<std::ptrdiff_t>(begin),
            plans_[i].begin() + static_cast<std::ptrdiff_t>(end)};
  }
  return {};
}

Bytes TrafficGenerator::payload() {
  const auto n = rng_.between(1, std::max<std::uint32_t>(config_.max_payload, 1));
  Bytes out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(static_cast<char>(rng_.below(256)));
  return out;
}

const PfcpSession &TrafficGenerator::pick(std::size_t slice_index) {
  const auto &plan = plans_[slice_index];
  return plan[rng_.below(plan.size())];
}

GtpPacket TrafficGenerator::next_packet(const ContainerId &upf, Direction direction) {
  ++packet_seq_;
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    if (slices_[i].upf != upf) continue;
    return direction == Direction::Uplink ? uplink(slices_[i], i) : downlink(slices_[i], i);
  }
  // Not a slice UPF: stray traffic with an unknown TEID.
  GtpPacket p{"gnb", upf, kUnknownTeidBase | static_cast<std::uint32_t>(rng_.below(1U << 24)), payload(),
              direction, "", {}};
  p.wire = encode_gpdu(p.teid, p.inner_payload);
  return p;
}

GtpPacket TrafficGenerator::uplink(const SliceSpec &s, std::size_t slice_index) {
  GtpPacket p;
  p.outer_src = "gnb";
  p.outer_dst = s.upf;
  p.direction = Direction::Uplink;
  p.slice = s.name;
  p.inner_payload = payload();

  auto roll = rng_.below(1000);
  const auto &cfg = config_;
  auto next_band = [&roll](std::uint32_t width) {
    if (roll < width) return true;
    roll -= width;
    return false;
  };

  if (next_band(cfg.echo_permille)) {
    p.teid = 0;
    p.wire = encode_gtpu(GtpHeader{kGtpFlagsV1, kGtpMsgEchoRequest, static_cast<std::uint16_t>(p.inner_payload.size()), 0},
                         p.inner_payload);
    return p;
  }
  if (next_band(cfg.unknown_teid_permille) || plans_[slice_index].empty()) {
    p.teid = kUnknownTeidBase | static_cast<std::uint32_t>(rng_.below(1U << 24));
    p.wire = encode_gpdu(p.teid, p.inner_payload);
    return p;
  }
  if (next_band(cfg.misroute_permille) && slices_.size() > 1) {
    // A packet of another slice arriving at this UPF.
    auto other = rng_.below(slices_.size() - 1);
    if (other >= slice_index) ++other;
    if (plans_[other].empty()) other = slice_index;
    const auto &victim = pick(other);
    p.slice = slices_[other].name;
    p.teid = victim.teid;
    p.wire = encode_gpdu(p.teid, p.inner_payload);
    return p;
  }

  const auto &session = pick(slice_index);
  p.teid = session.teid;
  p.wire = encode_gpdu(p.teid, p.inner_payload);
  if (next_band(cfg.malformed_permille)) {
    switch (rng_.below(6)) {
      case 0: p.wire.resize(rng_.below(kGtpHeaderSize)); break;                  // truncated header
      case 1: p.wire[0] = static_cast<char>(0x50); break;                        // version 2
      case 2: p.wire[0] = static_cast<char>(kGtpFlagsV1 | 0x04); break;          // E flag
      case 3: p.wire[2] = static_cast<char>(p.wire[2] ^ 0x01); break;            // length
      case 4: p.wire[1] = static_cast<char>(0x1a); break;                        // error indication
      default: p.wire = encode_gpdu(p.teid, ""); break;                          // no payload
    }
  }
  return p;
}

GtpPacket TrafficGenerator::downlink(const SliceSpec &s, std::size_t slice_index) {
  GtpPacket p;
  p.outer_src = s.dn;
  p.outer_dst = s.upf;
  p.direction = Direction::Downlink;
  p.slice = s.name;
  p.inner_payload = payload();

  const auto roll = rng_.below(1000);
  if (roll < config_.malformed_permille) {
    p.wire = Bytes(rng_.below(kUeAddrSize + 1), '\0');
    return p;
  }
  if (roll < config_.malformed_permille + config_.unknown_teid_permille || plans_[slice_index].empty()) {
    p.wire = encode_downlink(0xc0a80000U | static_cast<std::uint32_t>(rng_.below(1U << 16)), p.inner_payload);
    return p;
  }
  const auto &session = pick(slice_index);
  p.teid = session.teid;
  p.wire = encode_downlink(session.ue_addr, p.inner_payload);
  return p;
}

}  // namespace ebpfsim::upf
