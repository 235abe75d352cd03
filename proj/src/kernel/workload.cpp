/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/kernel/workload.hpp"

#include <array>
#include <utility>

namespace ebpfsim::kernel {
namespace {
using Op = WorkloadStep::Op;
constexpr std::array<std::pair<Op, std::string_view>, 11> kOps = {{
    {Op::Openat, "openat"},
    {Op::Read, "read"},
    {Op::Write, "write"},
    {Op::Close, "close"},
    {Op::Execve, "execve"},
    {Op::Getpid, "getpid"},
    {Op::Interpret, "interpret"},
    {Op::Sleep, "sleep"},
    {Op::Sendmsg, "sendmsg"},
    {Op::BpfLoad, "bpf_load"},
    {Op::Exit, "exit"},
}};
}  // namespace

std::string_view to_string(WorkloadStep::Op op) {
  for (const auto &[o, name] : kOps) {
    if (o == op) return name;
  }
  return "?";
}

std::optional<WorkloadStep::Op> parse_step_op(std::string_view text) {
  for (const auto &[o, name] : kOps) {
    if (name == text) return o;
  }
  return std::nullopt;
}

}  // namespace ebpfsim::kernel
