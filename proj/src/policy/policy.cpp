/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/policy/policy.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <sstream>

namespace ebpfsim::policy {

std::string_view to_string(PolicyMode m) {
  switch (m) {
    case PolicyMode::Permissive: return "permissive";
    case PolicyMode::CapabilityStrip: return "capability_strip";
    case PolicyMode::FineGrained: return "fine_grained";
  }
  return "?";
}

std::optional<PolicyMode> parse_policy_mode(std::string_view text) {
  for (auto m : {PolicyMode::Permissive, PolicyMode::CapabilityStrip, PolicyMode::FineGrained}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

const ContainerRule *Policy::rule(const ContainerId &id) const {
  auto it = rules_.find(id);
  return it == rules_.end() ? nullptr : &it->second;
}

CapabilitySet Policy::effective_caps(const ContainerId &id, const CapabilitySet &granted) const {
  const auto *r = rule(id);
  if (mode_ == PolicyMode::Permissive || r == nullptr) return granted;
  if (r->caps_override) return *r->caps_override;
  if (mode_ == PolicyMode::CapabilityStrip) {
    auto caps = granted;
    caps.erase(Capability::SysAdmin);
    caps.erase(Capability::Bpf);
    return caps;
  }
  return granted;
}

Expected<void, bpf::LoadError> Policy::check(const bpf::OwnerInfo &owner, const bpf::EbpfProgram &prog) const {
  using bpf::LoadError;
  using bpf::LoadErrorKind;
  if (!bpf::can_load_programs(effective_caps(owner.id, owner.caps))) {
    return unexpected(LoadError{LoadErrorKind::CapabilityDenied, {}});
  }
  if (mode_ != PolicyMode::FineGrained) return {};
  const auto *r = rule(owner.id);
  if (r == nullptr) return {};
  const auto hook = prog.hook.canonical_name();
  if (r->allowed_hooks && !r->allowed_hooks->contains(hook)) {
    return unexpected(LoadError{LoadErrorKind::HookDenied, hook});
  }
  if (r->allowed_helpers) {
    // HelperSet iterates in canonical order.
    for (auto h : prog.declared_helpers) {
      if (!r->allowed_helpers->contains(h)) {
        return unexpected(LoadError{LoadErrorKind::HelperDenied, std::string(bpf::to_string(h))});
      }
    }
  }
  return {};
}

OrderedJson Policy::to_json() const {
  OrderedJson j;
  j["name"] = name_;
  j["mode"] = std::string(to_string(mode_));
  OrderedJson containers = OrderedJson::object();
  for (const auto &[id, r] : rules_) {
    OrderedJson c = OrderedJson::object();
    if (r.allowed_hooks) c["allowed_hooks"] = std::vector<std::string>(r.allowed_hooks->begin(), r.allowed_hooks->end());
    if (r.allowed_helpers) {
      OrderedJson helpers = OrderedJson::array();
      for (auto h : *r.allowed_helpers) helpers.push_back(std::string(bpf::to_string(h)));
      c["allowed_helpers"] = helpers;
    }
    if (r.caps_override) {
      OrderedJson caps = OrderedJson::array();
      for (auto cap : {Capability::NetAdmin, Capability::SysAdmin, Capability::Bpf}) {
        if (r.caps_override->contains(cap)) caps.push_back(std::string(to_string(cap)));
      }
      c["caps_override"] = caps;
    }
    containers[id] = c;
  }
  j["containers"] = containers;
  return j;
}

Expected<Policy, ConfigError> policy_from_json(const OrderedJson &j, const std::string &path) {
  try {
    JsonObject o(j, path);
    o.reject_unknown({"name", "mode", "containers"});
    const auto name = o.str("name");
    if (name.empty()) throw ValidationError(o.path("name") + " must not be empty");
    const auto mode_text = o.str("mode");
    const auto mode = parse_policy_mode(mode_text);
    if (!mode) throw ValidationError(o.path("mode") + ": unknown mode '" + mode_text + "'");

    std::map<ContainerId, ContainerRule> rules;
    if (o.has("containers")) {
      const auto containers = o.object("containers");
      for (const auto &[id, body] : o.req("containers").items()) {
        JsonObject c(body, containers.path(id));
        c.reject_unknown({"allowed_hooks", "allowed_helpers", "caps_override"});
        ContainerRule r;
        if (c.has("allowed_hooks")) {
          r.allowed_hooks.emplace();
          for (const auto &h : c.strings("allowed_hooks")) {
            auto hook = bpf::HookPoint::parse(h);
            if (!hook) throw ValidationError(c.path("allowed_hooks") + ": unknown hook '" + h + "'");
            r.allowed_hooks->insert(hook->canonical_name());
          }
        }
        if (c.has("allowed_helpers")) {
          r.allowed_helpers.emplace();
          for (const auto &h : c.strings("allowed_helpers")) {
            auto helper = bpf::parse_helper(h);
            if (!helper) throw ValidationError(c.path("allowed_helpers") + ": unknown helper '" + h + "'");
            r.allowed_helpers->insert(*helper);
          }
        }
        if (c.has("caps_override")) {
          r.caps_override.emplace();
          for (const auto &cap : c.strings("caps_override")) {
            auto parsed = parse_capability(cap);
            if (!parsed) throw ValidationError(c.path("caps_override") + ": unknown capability '" + cap + "'");
            r.caps_override->insert(*parsed);
          }
        }
        rules.emplace(id, std::move(r));
      }
    }
    return Policy(name, *mode, std::move(rules));
  } catch (const ValidationError &e) {
    return unexpected(ConfigError{ConfigError::Kind::Validation, e.what()});
  }
}

Expected<std::vector<Policy>, ConfigError> parse_policy_file(std::string_view text) {
  auto doc = parse_json_text(text);
  if (!doc) return unexpected(doc.error());
  try {
    JsonObject o(*doc, "$");
    o.reject_unknown({"schema", "policies"});
    const auto schema = o.str("schema");
    if (schema != kPolicySchema) {
      throw ValidationError("$.schema: expected '" + std::string(kPolicySchema) + "', got '" + schema + "'");
    }
    const auto &list = o.req("policies");
    if (!list.is_array()) throw ValidationError("$.policies must be an array");
    std::vector<Policy> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto p = policy_from_json(list[i], "$.policies[" + std::to_string(i) + "]");
      if (!p) return unexpected(p.error());
      if (!names.insert(p->name()).second) {
        throw ValidationError("$.policies[" + std::to_string(i) + "]: duplicate policy name '" + p->name() + "'");
      }
      out.push_back(std::move(*p));
    }
    return out;
  } catch (const ValidationError &e) {
    return unexpected(ConfigError{ConfigError::Kind::Validation, e.what()});
  }
}

Expected<std::vector<Policy>, ConfigError> load_policy_file(const std::string &path) {
  auto text = read_text_file(path);
  if (!text) return unexpected(text.error());
  return parse_policy_file(*text);
}

std::vector<Policy> shipped_policies(const std::vector<ContainerId> &upfs) {
  std::map<ContainerId, ContainerRule> strip;
  std::map<ContainerId, ContainerRule> fine;
  for (const auto &id : upfs) {
    strip[id] = ContainerRule{};
    ContainerRule r;
    r.allowed_hooks = std::set<std::string>{bpf::HookPoint::xdp().canonical_name()};
    r.allowed_helpers = bpf::HelperSet{bpf::Helper::MapUpdate, bpf::Helper::MapLookup, bpf::Helper::MapDelete,
                                       bpf::Helper::EmitRecord};
    fine[id] = std::move(r);
  }
  return {Policy("Permissive", PolicyMode::Permissive), Policy("CapabilityStrip", PolicyMode::CapabilityStrip, strip),
          Policy("FineGrained", PolicyMode::FineGrained, fine)};
}

// ---------------------------------------------------------------------------

const MatrixCell *OutcomeMatrix::cell(attacks::AttackKind kind, const std::string &policy) const {
  for (const auto &c : cells) {
    if (c.kind == kind && c.policy == policy) return &c;
  }
  return nullptr;
}

std::string OutcomeMatrix::render_table() const {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"attack"};
  header.insert(header.end(), policies.begin(), policies.end());
  grid.push_back(header);
  for (auto kind : rows) {
    std::vector<std::string> line{std::string(attacks::to_string(kind))};
    for (const auto &p : policies) {
      const auto *c = cell(kind, p);
      line.push_back(c != nullptr ? c->outcome.to_string() : "-");
    }
    grid.push_back(std::move(line));
  }
  std::vector<std::string> health{"upf_ok"};
  for (const auto &p : policies) health.push_back(upf_ok.at(p) ? "true" : "false");
  grid.push_back(std::move(health));

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto &line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
  }
  std::ostringstream out;
  for (const auto &line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i + 1 == line.size()) {
        out << line[i] << "\n";
      } else {
        out << std::left << std::setw(static_cast<int>(widths[i])) << line[i] << "  ";
      }
    }
  }
  return out.str();
}

OrderedJson OutcomeMatrix::to_json() const {
  OrderedJson records = OrderedJson::array();
  for (const auto &c : cells) {
    OrderedJson r;
    r["attack"] = std::string(attacks::to_string(c.kind));
    r["policy"] = c.policy;
    r["outcome"] = std::string(attacks::to_string(c.outcome.kind));
    if (!c.outcome.reason.empty()) r["reason"] = c.outcome.reason;
    OrderedJson detail = OrderedJson::array();
    for (const auto &a : c.attacks) {
      detail.push_back({{"id", a.attack_id}, {"outcome", a.outcome.to_string()}});
    }
    r["attacks"] = detail;
    records.push_back(std::move(r));
  }
  OrderedJson health = OrderedJson::object();
  for (const auto &p : policies) health[p] = upf_ok.at(p);
  OrderedJson j;
  j["cells"] = records;
  j["upf_ok"] = health;
  return j;
}

attacks::Outcome combine(const std::vector<AttackResult> &results) {
  if (results.empty()) return {attacks::OutcomeKind::NotRun, {}};
  const auto &first = results.front().outcome;
  const bool same = std::all_of(results.begin(), results.end(),
                                [&](const AttackResult &r) { return r.outcome.kind == first.kind; });
  if (same) return first;
  std::string detail;
  for (const auto &r : results) {
    if (!detail.empty()) detail += ", ";
    detail += r.attack_id + "=" + std::string(attacks::to_string(r.outcome.kind));
  }
  return {attacks::OutcomeKind::Degraded, "mixed: " + detail};
}

OutcomeMatrix evaluate_matrix(const std::vector<Policy> &policies, const ScenarioRunner &run, bool parallel) {
  std::vector<RunOutcome> outcomes(policies.size());
  if (parallel) {
    std::vector<std::future<RunOutcome>> futures;
    futures.reserve(policies.size());
    for (const auto &p : policies) futures.push_back(std::async(std::launch::async, [&run, &p] { return run(p); }));
    for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < policies.size(); ++i) outcomes[i] = run(policies[i]);
  }

  OutcomeMatrix m;
  for (auto kind : attacks::all_attack_kinds()) {
    const bool present = std::any_of(outcomes.begin(), outcomes.end(), [&](const RunOutcome &o) {
      return std::any_of(o.attacks.begin(), o.attacks.end(), [&](const AttackResult &a) { return a.kind == kind; });
    });
    if (present) m.rows.push_back(kind);
  }
  for (std::size_t i = 0; i < policies.size(); ++i) {
    m.policies.push_back(policies[i].name());
    m.upf_ok[policies[i].name()] = outcomes[i].upf_ok;
  }
  for (auto kind : m.rows) {
    for (std::size_t i = 0; i < policies.size(); ++i) {
      MatrixCell c;
      c.kind = kind;
      c.policy = policies[i].name();
      for (const auto &a : outcomes[i].attacks) {
        if (a.kind == kind) c.attacks.push_back(a);
      }
      c.outcome = combine(c.attacks);
      m.cells.push_back(std::move(c));
    }
  }
  return m;
}

}  // namespace ebpfsim::policy
