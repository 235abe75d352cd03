/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/harness/replay.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>

#include "ebpfsim/bpf/runtime.hpp"
#include "ebpfsim/policy/policy.hpp"

namespace ebpfsim::harness {
namespace {

constexpr std::array<std::string_view, 5> kFieldOrder = {"tick", "kind", "pid", "container", "detail"};

CapabilitySet parse_cap_list(const std::string &text) {
  CapabilitySet caps;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (auto cap = parse_capability(text.substr(start, end - start))) caps.insert(*cap);
    start = end + 1;
  }
  return caps;
}

struct OpenSyscall {
  std::uint64_t sc = 0;
  std::uint64_t pid = 0;
  bool exit_seen = false;
};

class Checker {
 public:
  void record(std::size_t line, const OrderedJson &j) {
    line_ = line;
    if (!structure(j)) return;
    const auto tick = j["tick"].get<std::uint64_t>();
    const auto kind = j["kind"].get<std::string>();
    const auto pid = j["pid"].get<std::uint64_t>();
    const auto container = j["container"].get<std::string>();
    const auto &d = j["detail"];

    if (line == 1) {
      header(kind, d);
      return;
    }
    if (tick < last_tick_) fail(ViolationClass::Ordering, "tick goes backwards");
    last_tick_ = tick;

    if (kind == "container_create") {
      const auto caps = parse_cap_list(d.value("caps", ""));
      caps_[container] = caps;
      if (policy_ && d.contains("granted")) {
        const auto expected = policy_->effective_caps(container, parse_cap_list(d.value("granted", "")));
        if (!(expected.to_string() == caps.to_string())) {
          fail(ViolationClass::PolicySoundness, "container '" + container + "' runs with caps the policy strips");
        }
      }
    } else if (kind == "syscall_enter") {
      const auto sc = d.value("sc", std::uint64_t{0});
      if (open_) fail(ViolationClass::Ordering, "syscall " + std::to_string(sc) + " starts inside another syscall");
      if (sc <= last_sc_) fail(ViolationClass::Ordering, "syscall sequence number does not increase");
      if (killed_.contains(pid)) fail(ViolationClass::KillSemantics, "killed task issued a syscall");
      last_sc_ = std::max(last_sc_, sc);
      open_ = OpenSyscall{sc, pid, false};
    } else if (kind == "syscall_exit" || kind == "syscall_abort") {
      const auto sc = d.value("sc", std::uint64_t{0});
      if (!open_ || open_->sc != sc || open_->pid != pid) {
        fail(ViolationClass::Ordering, kind + " without a matching syscall_enter");
      }
      if (kind == "syscall_exit" && killed_.contains(pid)) {
        fail(ViolationClass::KillSemantics, "syscall of a killed task returned to user space");
      }
      if (kind == "syscall_abort" && !killed_.contains(pid)) {
        fail(ViolationClass::KillSemantics, "syscall aborted but the task was never killed");
      }
      open_.reset();
    } else if (kind == "hook" || kind == "helper") {
      program_record(kind, pid, d);
    } else if (kind == "state") {
      if (d.value("to", "") == "Killed") killed_.insert(pid);
    } else if (kind == "bpf_load") {
      if (d.value("ok", false) && !bpf::can_load_programs(caps_for(container))) {
        fail(ViolationClass::PolicySoundness, "'" + container + "' loaded programs without CAP_SYS_ADMIN or CAP_BPF");
      }
    }
  }

  ReplayReport finish(std::size_t records) {
    report_.records = records;
    return std::move(report_);
  }

 private:
  bool structure(const OrderedJson &j) {
    if (!j.is_object() || j.size() != kFieldOrder.size()) {
      fail(ViolationClass::Schema, "record must have exactly tick, kind, pid, container, detail");
      return false;
    }
    std::size_t i = 0;
    for (const auto &[k, v] : j.items()) {
      if (k != kFieldOrder[i++]) {
        fail(ViolationClass::Schema, "fields out of order");
        return false;
      }
    }
    if (!j["tick"].is_number_unsigned() || !j["kind"].is_string() || !j["pid"].is_number_unsigned() ||
        !j["container"].is_string() || !j["detail"].is_object()) {
      fail(ViolationClass::Schema, "field has the wrong type");
      return false;
    }
    return true;
  }

  void header(const std::string &kind, const OrderedJson &d) {
    if (kind != "header" || d.value("schema", "") != kLogSchema) {
      fail(ViolationClass::Schema, "first record must be the " + std::string(kLogSchema) + " header");
      return;
    }
    if (d.contains("policy")) {
      auto p = policy::policy_from_json(d["policy"], "header.policy");
      if (p) {
        policy_ = std::move(*p);
      } else {
        fail(ViolationClass::Schema, p.error().message);
      }
    }
  }

  CapabilitySet caps_for(const std::string &container) const {
    auto it = caps_.find(container);
    return it == caps_.end() ? CapabilitySet{} : it->second;
  }

  void program_record(const std::string &kind, std::uint64_t pid, const OrderedJson &d) {
    const auto sc = d.value("sc", std::uint64_t{0});
    const auto phase = d.value("phase", "");
    if (!open_ || open_->sc != sc || open_->pid != pid) {
      fail(ViolationClass::Ordering, kind + " record outside its syscall");
    } else if (phase == "Exit") {
      open_->exit_seen = true;
    } else if (open_->exit_seen) {
      fail(ViolationClass::Ordering, "entry-phase " + kind + " after the syscall's exit phase");
    }

    const auto owner = d.value("owner", "");
    if (!bpf::can_load_programs(caps_for(owner))) {
      fail(ViolationClass::PolicySoundness, "program of '" + owner + "' runs without load capabilities");
    }
    const auto *rule = policy_ && policy_->mode() == policy::PolicyMode::FineGrained ? policy_->rule(owner) : nullptr;

    if (kind == "hook") {
      const auto hook = d.value("hook", "");
      if (rule != nullptr && rule->allowed_hooks && !rule->allowed_hooks->contains(hook)) {
        fail(ViolationClass::PolicySoundness, "hook " + hook + " is not allowed for '" + owner + "'");
      }
      return;
    }

    const auto name = d.value("helper", "");
    const auto helper = bpf::parse_helper(name);
    if (!helper) {
      fail(ViolationClass::Schema, "unknown helper '" + name + "'");
      return;
    }
    if (rule != nullptr && rule->allowed_helpers && !rule->allowed_helpers->contains(*helper)) {
      fail(ViolationClass::PolicySoundness, "helper " + name + " is not allowed for '" + owner + "'");
    }
    if (!d.value("ok", false)) return;
    if ((*helper == bpf::Helper::ProbeWriteUser || *helper == bpf::Helper::OverrideReturn) && phase != "Exit") {
      fail(ViolationClass::PhaseSafety, name + " took effect at phase " + phase);
    }
    if (*helper == bpf::Helper::ProbeWriteUser) {
      const auto fill = d.value("fill_before", "");
      if (fill != "Filled" && fill != "Overwritten") {
        fail(ViolationClass::PhaseSafety, "probe_write_user hit a buffer the kernel had not filled");
      }
    }
  }

  void fail(ViolationClass c, std::string message) { report_.violations.push_back({line_, c, std::move(message)}); }

  ReplayReport report_;
  std::size_t line_ = 0;
  std::uint64_t last_tick_ = 0;
  std::uint64_t last_sc_ = 0;
  std::optional<OpenSyscall> open_;
  std::set<std::uint64_t> killed_;
  std::map<std::string, CapabilitySet> caps_;
  std::optional<policy::Policy> policy_;
};

}  // namespace

std::string_view to_string(ViolationClass c) {
  switch (c) {
    case ViolationClass::Schema: return "schema";
    case ViolationClass::Ordering: return "ordering";
    case ViolationClass::PhaseSafety: return "phase-safety";
    case ViolationClass::PolicySoundness: return "policy-soundness";
    case ViolationClass::KillSemantics: return "kill-semantics";
  }
  return "?";
}

bool ReplayReport::has(ViolationClass c) const {
  for (const auto &v : violations) {
    if (v.kind == c) return true;
  }
  return false;
}

Expected<ReplayReport, ConfigError> verify_log(std::string_view text) {
  Checker checker;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto raw = text.substr(pos, end - pos);
    ++line;
    auto parsed = parse_json_text(raw);
    if (!parsed) {
      auto err = parsed.error();
      err.line = line;
      return unexpected(err);
    }
    checker.record(line, *parsed);
    pos = end + 1;
  }
  if (line == 0) return unexpected(ConfigError{ConfigError::Kind::Parse, "empty log", 1, 1});
  return checker.finish(line);
}

Expected<ReplayReport, ConfigError> verify_log_file(const std::string &path) {
  auto text = read_text_file(path);
  if (!text) return unexpected(text.error());
  return verify_log(*text);
}

}  // namespace ebpfsim::harness
