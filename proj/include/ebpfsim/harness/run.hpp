/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ebpfsim/harness/scenario.hpp"

namespace ebpfsim::harness {

inline constexpr std::string_view kReportSchema = "ebpfsim-report/1";

struct AttackRun {
  attacks::AttackSpec spec;
  attacks::Outcome outcome;
  std::vector<attacks::ExfilRecord> exfil;
};

struct UpfHealth {
  ContainerId upf;
  bool attached = false;
  std::size_t sessions = 0;
  upf::VerdictCounters counters;
};

/// A file as it stands in the simulated filesystem after the run.
struct FileState {
  ContainerId container;
  std::string path;
  Bytes contents;
  bool sensitive = false;
};

/// Everything a run produced, kept in memory; write_outputs() persists it.
struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string policy;
  std::string events;    // NDJSON event log
  std::string verdicts;  // NDJSON per-packet verdicts
  std::vector<AttackRun> attacks;
  std::vector<UpfHealth> upfs;
  std::vector<FileState> files;  // container creation order, then path
  bool upf_ok = false;
  kernel::RunStats stats;
  OrderedJson report;

  policy::RunOutcome outcome() const;
};

/// Executes the scenario under the given policy. A pure function of its
/// inputs: same scenario, seed and policy give identical bytes.
RunResult run_scenario(const Scenario &s, const policy::Policy &p);

/// Resolves the scenario's policy against the available set (the shipped
/// policies when `available` is empty).
Expected<policy::Policy, ConfigError> resolve_policy(const Scenario &s, const std::vector<policy::Policy> &available);

/// Writes <out>/<scenario>/<seed>/{events.log, report.json, verdicts.log,
/// exfil/<attack>.log} and returns that directory.
Expected<std::string, ConfigError> write_outputs(const RunResult &r, const std::string &out_root);

/// The full attack x policy evaluation for one scenario.
policy::OutcomeMatrix run_matrix(const Scenario &s, const std::vector<policy::Policy> &policies, bool parallel = true);

}  // namespace ebpfsim::harness
