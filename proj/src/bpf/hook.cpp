/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/bpf/hook.hpp"

#include <algorithm>

namespace ebpfsim::bpf {
namespace {
constexpr std::string_view kSysEnter = "raw_tracepoint/sys_enter";
constexpr std::string_view kSysExitAny = "tracepoint/raw_syscalls/sys_exit";
constexpr std::string_view kSysExitPrefix = "tracepoint/sys_exit_";
constexpr std::string_view kKprobePrefix = "kprobe/__x64_sys_";
constexpr std::string_view kKretprobePrefix = "kretprobe/__x64_sys_";
constexpr std::string_view kXdp = "xdp";

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}
}  // namespace

std::string_view to_string(HookKind kind) {
  switch (kind) {
    case HookKind::RawTracepointSysEnter: return "RawTracepointSysEnter";
    case HookKind::TracepointSysExit: return "TracepointSysExit";
    case HookKind::Kprobe: return "Kprobe";
    case HookKind::Kretprobe: return "Kretprobe";
    case HookKind::Xdp: return "Xdp";
  }
  return "?";
}

std::string_view to_string(Phase phase) { return phase == Phase::Enter ? "Enter" : "Exit"; }

std::optional<Phase> parse_phase(std::string_view text) {
  if (text == "Enter" || text == "enter") return Phase::Enter;
  if (text == "Exit" || text == "exit") return Phase::Exit;
  return std::nullopt;
}

const std::vector<std::string_view> &known_syscalls() {
  static const std::vector<std::string_view> names = {"openat", "read",  "write",   "close",
                                                      "execve", "getpid", "sendmsg", "bpf"};
  return names;
}

bool is_known_syscall(std::string_view name) {
  const auto &names = known_syscalls();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Expected<HookPoint, std::string> HookPoint::parse(std::string_view canonical) {
  if (canonical == kSysEnter) return sys_enter();
  if (canonical == kSysExitAny) return sys_exit();
  if (canonical == kXdp) return xdp();

  auto with_target = [&](std::string_view prefix, HookKind kind) -> Expected<HookPoint, std::string> {
    std::string target(canonical.substr(prefix.size()));
    if (!is_known_syscall(target)) {
      return unexpected("unknown syscall '" + target + "' in hook '" + std::string(canonical) + "'");
    }
    return HookPoint(kind, std::move(target));
  };
  if (starts_with(canonical, kSysExitPrefix)) return with_target(kSysExitPrefix, HookKind::TracepointSysExit);
  if (starts_with(canonical, kKprobePrefix)) return with_target(kKprobePrefix, HookKind::Kprobe);
  if (starts_with(canonical, kKretprobePrefix)) return with_target(kKretprobePrefix, HookKind::Kretprobe);
  return unexpected("unknown hook '" + std::string(canonical) + "'");
}

std::string HookPoint::canonical_name() const {
  switch (kind_) {
    case HookKind::RawTracepointSysEnter: return std::string(kSysEnter);
    case HookKind::TracepointSysExit:
      return target_ == kAnySyscall ? std::string(kSysExitAny) : std::string(kSysExitPrefix) + target_;
    case HookKind::Kprobe: return std::string(kKprobePrefix) + target_;
    case HookKind::Kretprobe: return std::string(kKretprobePrefix) + target_;
    case HookKind::Xdp: return std::string(kXdp);
  }
  return {};
}

std::optional<Phase> HookPoint::phase() const {
  switch (kind_) {
    case HookKind::RawTracepointSysEnter:
    case HookKind::Kprobe: return Phase::Enter;
    case HookKind::TracepointSysExit:
    case HookKind::Kretprobe: return Phase::Exit;
    case HookKind::Xdp: return std::nullopt;
  }
  return std::nullopt;
}

bool HookPoint::matches(Phase phase, std::string_view syscall) const {
  auto own = this->phase();
  if (!own || *own != phase) return false;
  return target_ == kAnySyscall || target_ == syscall;
}

}  // namespace ebpfsim::bpf
