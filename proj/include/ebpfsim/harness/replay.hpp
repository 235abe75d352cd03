/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ebpfsim/core/config.hpp"

namespace ebpfsim::harness {

enum class ViolationClass { Schema, Ordering, PhaseSafety, PolicySoundness, KillSemantics };
std::string_view to_string(ViolationClass c);

struct Violation {
  std::size_t line = 0;  // 1-based
  ViolationClass kind = ViolationClass::Schema;
  std::string message;
};

struct ReplayReport {
  std::size_t records = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationClass c) const;
};

/// Re-checks a recorded event log: record ordering and syscall nesting, that
/// user-memory writes and return overrides happen only at syscall exit after
/// the kernel filled the buffer, that no program ran a hook or helper outside
/// the allow-list in the header, and that killed tasks never issue another
/// syscall. Malformed lines are a parse error with their position.
Expected<ReplayReport, ConfigError> verify_log(std::string_view text);
Expected<ReplayReport, ConfigError> verify_log_file(const std::string &path);

}  // namespace ebpfsim::harness
