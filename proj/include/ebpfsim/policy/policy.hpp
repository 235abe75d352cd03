/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ebpfsim/attacks/attacks.hpp"
#include "ebpfsim/bpf/runtime.hpp"
#include "ebpfsim/core/config.hpp"

namespace ebpfsim::policy {

inline constexpr std::string_view kPolicySchema = "ebpfsim-policy/1";

enum class PolicyMode { Permissive, CapabilityStrip, FineGrained };
std::string_view to_string(PolicyMode m);
std::optional<PolicyMode> parse_policy_mode(std::string_view text);

/// Restrictions for one container. An absent set leaves that dimension
/// unrestricted.
struct ContainerRule {
  std::optional<std::set<std::string>> allowed_hooks;  // canonical hook names
  std::optional<bpf::HelperSet> allowed_helpers;
  std::optional<CapabilitySet> caps_override;
};

/// Load-time admission policy. Containers without a rule are unrestricted.
class Policy final : public bpf::LoadGate {
 public:
  Policy() = default;
  Policy(std::string name, PolicyMode mode, std::map<ContainerId, ContainerRule> rules = {})
      : name_(std::move(name)), mode_(mode), rules_(std::move(rules)) {}

  const std::string &name() const { return name_; }
  PolicyMode mode() const { return mode_; }
  const std::map<ContainerId, ContainerRule> &rules() const { return rules_; }
  const ContainerRule *rule(const ContainerId &id) const;

  /// Capabilities a container actually runs with under this policy.
  CapabilitySet effective_caps(const ContainerId &id, const CapabilitySet &granted) const;

  /// Capabilities first, then the hook, then helpers in canonical order; the
  /// error names the first violated rule.
  Expected<void, bpf::LoadError> check(const bpf::OwnerInfo &owner, const bpf::EbpfProgram &prog) const override;

  OrderedJson to_json() const;

 private:
  std::string name_ = "Permissive";
  PolicyMode mode_ = PolicyMode::Permissive;
  std::map<ContainerId, ContainerRule> rules_;
};

Expected<Policy, ConfigError> policy_from_json(const OrderedJson &j, const std::string &path = "policy");
/// A policy file: {"schema": "ebpfsim-policy/1", "policies": [...]}.
Expected<std::vector<Policy>, ConfigError> parse_policy_file(std::string_view text);
Expected<std::vector<Policy>, ConfigError> load_policy_file(const std::string &path);

/// The three reference policies for the given eUPF containers.
std::vector<Policy> shipped_policies(const std::vector<ContainerId> &upfs);

// ---------------------------------------------------------------------------
// Attack x policy evaluation

struct AttackResult {
  std::string attack_id;
  attacks::AttackKind kind = attacks::AttackKind::Tracing;
  attacks::Outcome outcome;
};

struct RunOutcome {
  std::vector<AttackResult> attacks;
  bool upf_ok = false;
};

struct MatrixCell {
  attacks::AttackKind kind = attacks::AttackKind::Tracing;
  std::string policy;
  attacks::Outcome outcome;  // combined over every attack of this kind
  std::vector<AttackResult> attacks;
};

struct OutcomeMatrix {
  std::vector<attacks::AttackKind> rows;
  std::vector<std::string> policies;
  std::vector<MatrixCell> cells;  // row-major
  std::map<std::string, bool> upf_ok;

  const MatrixCell *cell(attacks::AttackKind kind, const std::string &policy) const;
  std::string render_table() const;
  OrderedJson to_json() const;
};

/// Combines several attack outcomes of one kind: equal outcomes collapse,
/// anything else is Degraded.
attacks::Outcome combine(const std::vector<AttackResult> &results);

using ScenarioRunner = std::function<RunOutcome(const Policy &)>;

/// Runs the scenario once per policy (concurrently when parallel is set;
/// runs share nothing) and tabulates the outcomes.
OutcomeMatrix evaluate_matrix(const std::vector<Policy> &policies, const ScenarioRunner &run, bool parallel = true);

}  // namespace ebpfsim::policy
