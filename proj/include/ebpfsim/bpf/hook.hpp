/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ebpfsim/core/expected.hpp"

namespace ebpfsim::bpf {

enum class HookKind { RawTracepointSysEnter, TracepointSysExit, Kprobe, Kretprobe, Xdp };
enum class Phase { Enter, Exit };

std::string_view to_string(HookKind kind);
std::string_view to_string(Phase phase);
std::optional<Phase> parse_phase(std::string_view text);

inline constexpr std::string_view kAnySyscall = "*";

/// Syscalls implemented by the kernel model.
const std::vector<std::string_view> &known_syscalls();
bool is_known_syscall(std::string_view name);

/// An attachment point. The canonical name is the libbpf SEC() string and
/// maps one-to-one onto (kind, target):
///
///   raw_tracepoint/sys_enter          RawTracepointSysEnter, any syscall
///   tracepoint/raw_syscalls/sys_exit  TracepointSysExit, any syscall
///   tracepoint/sys_exit_<name>        TracepointSysExit, <name>
///   kprobe/__x64_sys_<name>           Kprobe, <name>
///   kretprobe/__x64_sys_<name>        Kretprobe, <name>
///   xdp                               Xdp (network ingress, not a syscall)
class HookPoint {
 public:
  static Expected<HookPoint, std::string> parse(std::string_view canonical);

  static HookPoint sys_enter() { return {HookKind::RawTracepointSysEnter, std::string(kAnySyscall)}; }
  static HookPoint sys_exit(std::string syscall = std::string(kAnySyscall)) {
    return {HookKind::TracepointSysExit, std::move(syscall)};
  }
  static HookPoint kprobe(std::string syscall) { return {HookKind::Kprobe, std::move(syscall)}; }
  static HookPoint kretprobe(std::string syscall) {
    return {HookKind::Kretprobe, std::move(syscall)};
  }
  static HookPoint xdp() { return {HookKind::Xdp, ""}; }

  HookKind kind() const { return kind_; }
  const std::string &target() const { return target_; }
  std::string canonical_name() const;

  /// Syscall phase this hook observes; nullopt for XDP.
  std::optional<Phase> phase() const;
  bool matches(Phase phase, std::string_view syscall) const;

  friend bool operator==(const HookPoint &, const HookPoint &) = default;

 private:
  HookPoint(HookKind kind, std::string target) : kind_(kind), target_(std::move(target)) {}

  HookKind kind_ = HookKind::RawTracepointSysEnter;
  std::string target_;
};

}  // namespace ebpfsim::bpf
