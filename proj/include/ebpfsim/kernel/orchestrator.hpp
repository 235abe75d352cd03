/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string_view>

#include "ebpfsim/core/types.hpp"

namespace ebpfsim::kernel {

/// Restart policy of the modeled container orchestrator. Defaults follow the
/// usual kubelet shape: exponential backoff from one tick, capped.
struct OrchestratorConfig {
  std::uint32_t threshold = 5;  // restarts allowed inside the window
  Tick window = 100;
  Tick backoff_initial = 1;
  Tick backoff_cap = 16;
};

enum class ContainerStatus { Healthy, Restarting, CrashLoopBackOff };
std::string_view to_string(ContainerStatus s);

struct OrchestratorEvent {
  enum class Kind { RestartScheduled, Restarted, CrashLoopBackOff };

  Kind kind;
  ContainerId container;
  Tick tick = 0;
  Tick restart_at = 0;  // RestartScheduled
  Tick backoff = 0;     // RestartScheduled
  std::uint32_t restart_count = 0;
};
std::string_view to_string(OrchestratorEvent::Kind k);

/// Bookkeeping half of the orchestrator; the kernel decides when a container
/// is down and carries out the restarts.
class Orchestrator {
 public:
  explicit Orchestrator(OrchestratorConfig config = {}) : config_(config) {}

  const OrchestratorConfig &config() const { return config_; }

  void track(const ContainerId &id);
  bool tracks(const ContainerId &id) const { return state_.contains(id); }

  /// All processes of the container are gone. Schedules a restart unless the
  /// restarts inside the window already reached the threshold, in which case
  /// the container enters CrashLoopBackOff for good.
  OrchestratorEvent on_down(const ContainerId &id, Tick now);
  OrchestratorEvent on_restarted(const ContainerId &id, Tick now);

  ContainerStatus status(const ContainerId &id) const;
  std::uint32_t restart_count(const ContainerId &id) const;
  Tick backoff(const ContainerId &id) const;
  std::uint32_t restarts_in_window(const ContainerId &id, Tick now) const;

 private:
  struct State {
    ContainerStatus status = ContainerStatus::Healthy;
    std::uint32_t restarts = 0;
    Tick backoff = 0;
    std::deque<Tick> restart_ticks;
  };

  OrchestratorConfig config_;
  std::map<ContainerId, State> state_;
};

}  // namespace ebpfsim::kernel
