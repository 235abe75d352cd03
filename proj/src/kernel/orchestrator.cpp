/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/kernel/orchestrator.hpp"

#include <algorithm>

namespace ebpfsim::kernel {

std::string_view to_string(ContainerStatus s) {
  switch (s) {
    case ContainerStatus::Healthy: return "Healthy";
    case ContainerStatus::Restarting: return "Restarting";
    case ContainerStatus::CrashLoopBackOff: return "CrashLoopBackOff";
  }
  return "?";
}

std::string_view to_string(OrchestratorEvent::Kind k) {
  switch (k) {
    case OrchestratorEvent::Kind::RestartScheduled: return "restart_scheduled";
    case OrchestratorEvent::Kind::Restarted: return "restarted";
    case OrchestratorEvent::Kind::CrashLoopBackOff: return "crash_loop_backoff";
  }
  return "?";
}

void Orchestrator::track(const ContainerId &id) { state_.try_emplace(id); }

std::uint32_t Orchestrator::restarts_in_window(const ContainerId &id, Tick now) const {
  auto it = state_.find(id);
  if (it == state_.end()) return 0;
  return static_cast<std::uint32_t>(std::count_if(it->second.restart_ticks.begin(),
                                                  it->second.restart_ticks.end(),
                                                  [&](Tick t) { return now < t + config_.window; }));
}

OrchestratorEvent Orchestrator::on_down(const ContainerId &id, Tick now) {
  auto &s = state_[id];
  const auto recent = restarts_in_window(id, now);
  if (recent >= config_.threshold) {
    s.status = ContainerStatus::CrashLoopBackOff;
    return {OrchestratorEvent::Kind::CrashLoopBackOff, id, now, 0, 0, s.restarts};
  }
  Tick backoff = config_.backoff_initial;
  for (std::uint32_t i = 0; i < recent && backoff < config_.backoff_cap; ++i) backoff *= 2;
  backoff = std::min(backoff, config_.backoff_cap);
  s.status = ContainerStatus::Restarting;
  s.backoff = backoff;
  return {OrchestratorEvent::Kind::RestartScheduled, id, now, now + backoff, backoff, s.restarts};
}

OrchestratorEvent Orchestrator::on_restarted(const ContainerId &id, Tick now) {
  auto &s = state_[id];
  s.status = ContainerStatus::Healthy;
  ++s.restarts;
  s.restart_ticks.push_back(now);
  while (s.restart_ticks.size() > config_.threshold + 1) s.restart_ticks.pop_front();
  return {OrchestratorEvent::Kind::Restarted, id, now, now, s.backoff, s.restarts};
}

ContainerStatus Orchestrator::status(const ContainerId &id) const {
  auto it = state_.find(id);
  return it == state_.end() ? ContainerStatus::Healthy : it->second.status;
}

std::uint32_t Orchestrator::restart_count(const ContainerId &id) const {
  auto it = state_.find(id);
  return it == state_.end() ? 0 : it->second.restarts;
}

Tick Orchestrator::backoff(const ContainerId &id) const {
  auto it = state_.find(id);
  return it == state_.end() ? 0 : it->second.backoff;
}

}  // namespace ebpfsim::kernel
