/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ebpfsim/bpf/hook.hpp"
#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/core/types.hpp"

namespace ebpfsim::bpf {

/// Opaque user-space address.
struct UserPtr {
  std::uint64_t addr = 0;
  friend bool operator==(const UserPtr &, const UserPtr &) = default;
};

using SyscallArg = std::variant<std::int64_t, UserPtr>;

enum class FillState { Empty, Filled, Overwritten };
std::string_view to_string(FillState s);

enum class HelperError {
  BufferEmpty,
  BadAddress,
  TooBig,
  InvalidSignal,
  InvalidPhase,
  OverrideConflict,
  MapFull,
  KeyNotFound,
  TypeMismatch,
  InvalidArgument,
};
std::string_view to_string(HelperError e);

/// What a program sees when its hook fires.
struct EventContext {
  Pid pid;
  std::uint32_t tgid = 0;
  std::uint32_t uid = 0;
  std::uint32_t gid = 0;
  Comm comm;
  ContainerId container;
  std::string syscall;
  Phase phase = Phase::Enter;
  std::vector<SyscallArg> args;
  std::optional<UserPtr> user_buffer;
  std::int64_t natural_retval = 0;  // Exit only
  std::optional<std::int64_t> posted_override;
  std::uint64_t syscall_seq = 0;

  std::uint64_t pid_tgid() const {
    return (static_cast<std::uint64_t>(tgid) << 32) | pid.value();
  }
  std::uint64_t uid_gid() const { return (static_cast<std::uint64_t>(gid) << 32) | uid; }
  /// Pointer argument holding the path for openat/execve.
  std::optional<UserPtr> filename_arg() const;
};

/// Kernel facilities helpers reach through. Addresses resolve in the address
/// space of the given pid (always the current task).
class KernelServices {
 public:
  virtual ~KernelServices() = default;

  virtual Tick now() const = 0;
  virtual Expected<Bytes, HelperError> read_user(Pid pid, UserPtr ptr, std::uint64_t len) const = 0;
  virtual Expected<Bytes, HelperError> read_user_str(Pid pid, UserPtr ptr) const = 0;
  /// Overwrites a prefix of the buffer; returns the fill state it had before.
  virtual Expected<FillState, HelperError> write_user(Pid pid, UserPtr ptr, const Bytes &data) = 0;
  virtual void send_signal(Pid pid, int signo, const std::string &source) = 0;
};

}  // namespace ebpfsim::bpf
