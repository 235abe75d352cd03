/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ebpfsim/attacks/attacks.hpp"
#include "ebpfsim/core/config.hpp"
#include "ebpfsim/kernel/kernel.hpp"
#include "ebpfsim/policy/policy.hpp"
#include "ebpfsim/upf/topology.hpp"

namespace ebpfsim::harness {

inline constexpr std::string_view kScenarioSchema = "ebpfsim-scenario/1";
inline constexpr std::string_view kTopologyPreset = "sba-two-slice";

struct FileDecl {
  ContainerId container;
  std::string path;
  Bytes contents;
  std::string generator;  // "ssh_private_key": contents derived from the seed
  bool sensitive = false;
};

struct ProcessDecl {
  ContainerId container;
  std::string comm;
  std::string workload;
  Tick start = 0;
  std::uint32_t uid = 0;
  std::uint32_t gid = 0;
};

/// A custom object loaded by a process in `owner` at tick `start`.
struct ObjectDecl {
  bpf::BpfObject object;
  ContainerId owner;
  std::string loader_comm;
  Tick start = 1;
};

struct AttackDecl {
  attacks::AttackSpec spec;
  std::string loader_comm;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  Tick tick_limit = 1;
  kernel::OrchestratorConfig orchestrator;
  std::optional<upf::TopologyConfig> topology;
  std::vector<kernel::ContainerSpec> containers;
  std::vector<FileDecl> files;
  std::vector<kernel::Workload> workloads;
  std::vector<ProcessDecl> processes;
  std::vector<ObjectDecl> objects;
  std::vector<AttackDecl> attacks;
  /// A policy name (resolved against the available policies) or an inline
  /// policy; absent means Permissive.
  std::variant<std::monostate, std::string, policy::Policy> policy;
  /// The source document (seed overrides applied), used for the scenario
  /// hash.
  OrderedJson document;

  std::uint64_t hash() const;
};

/// Parses and validates a scenario document. Every cross reference
/// (containers, workloads, attack owners, policy names when `known_policies`
/// is given) must resolve.
Expected<Scenario, ConfigError> parse_scenario(std::string_view text,
                                               const std::vector<std::string> *known_policies = nullptr);
Expected<Scenario, ConfigError> load_scenario(const std::string &path,
                                              const std::vector<std::string> *known_policies = nullptr);

/// Replaces the seed (and everything derived from it).
void override_seed(Scenario &s, std::uint64_t seed);

/// Container ids the scenario will create, topology included, in creation
/// order.
std::vector<ContainerId> scenario_containers(const Scenario &s);
std::vector<ContainerId> scenario_upfs(const Scenario &s);

/// PEM-shaped private key text derived from the seed.
std::string generate_ssh_key(std::uint64_t seed, const std::string &salt);

}  // namespace ebpfsim::harness
