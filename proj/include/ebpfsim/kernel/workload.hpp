/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebpfsim/core/types.hpp"

namespace ebpfsim::kernel {

/// One scripted action. Syscall steps operate on the most recently opened fd
/// and the most recently read buffer, which keeps scripts linear.
struct WorkloadStep {
  enum class Op { Openat, Read, Write, Close, Execve, Getpid, Interpret, Sleep, Sendmsg, BpfLoad, Exit };

  Op op = Op::Sleep;
  std::string path;                // openat, execve
  std::uint64_t capacity = 4096;   // read buffer size
  Bytes data;                      // write
  std::string iface;               // sendmsg
  std::string peer;                // sendmsg
  std::uint64_t count = 1;         // sendmsg
  std::string object;              // bpf_load
  Tick ticks = 1;                  // time the step occupies, at least 1
};

std::string_view to_string(WorkloadStep::Op op);
std::optional<WorkloadStep::Op> parse_step_op(std::string_view text);

struct Workload {
  std::string id;
  std::vector<WorkloadStep> steps;
  bool repeat = false;
  Tick period = 1;  // extra delay before the next iteration
  std::size_t loop_start = 0;  // steps before this index run once
};

}  // namespace ebpfsim::kernel
