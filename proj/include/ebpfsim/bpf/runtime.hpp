/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ebpfsim/bpf/context.hpp"
#include "ebpfsim/bpf/map.hpp"
#include "ebpfsim/bpf/program.hpp"
#include "ebpfsim/core/event_log.hpp"
#include "ebpfsim/core/expected.hpp"

namespace ebpfsim::bpf {

struct ProgTag {};
struct LinkTag {};
using ProgId = StrongId<ProgTag, std::uint32_t>;
using LinkId = StrongId<LinkTag, std::uint32_t>;

enum class LoadErrorKind { CapabilityDenied, HookDenied, HelperDenied, MalformedProgram };
std::string_view to_string(LoadErrorKind k);

struct LoadError {
  LoadErrorKind kind = LoadErrorKind::MalformedProgram;
  std::string subject;  // hook or helper name, or the verifier message

  /// "CapabilityDenied", "HelperDenied: probe_write_user", ...
  std::string to_string() const;
  friend bool operator==(const LoadError &, const LoadError &) = default;
};

enum class AttachError { NotLoaded, HookMismatch, AlreadyAttached };
std::string_view to_string(AttachError e);

struct OwnerInfo {
  ContainerId id;
  CapabilitySet caps;
};

/// CAP_SYS_ADMIN or CAP_BPF lets a task load programs; NET_ADMIN alone does not.
bool can_load_programs(const CapabilitySet &caps);

/// Load-time admission hook (the policy layer plugs in here).
class LoadGate {
 public:
  virtual ~LoadGate() = default;
  virtual Expected<void, LoadError> check(const OwnerInfo &owner, const EbpfProgram &prog) const = 0;
};

/// Admits everything; only the runtime's own capability check applies.
class PermissiveGate final : public LoadGate {
 public:
  Expected<void, LoadError> check(const OwnerInfo &, const EbpfProgram &) const override {
    return {};
  }
};

using HelperValue = std::variant<std::monostate, std::uint64_t, Bytes>;

/// One helper invocation as it happened.
struct HelperEffect {
  Tick tick = 0;
  ProgId prog;
  std::string program;
  ContainerId owner;
  Helper helper = Helper::GetCurrentPidTgid;
  Phase phase = Phase::Enter;
  std::string syscall;
  std::uint64_t syscall_seq = 0;
  Pid pid;
  ContainerId container;
  std::optional<HelperError> error;
  HelperValue result;
  std::optional<FillState> fill_before;  // buffer helpers only

  bool ok() const { return !error.has_value(); }
};

/// An emit_record() output.
struct ChannelRecord {
  Tick tick = 0;
  std::string program;
  std::string kind;
  std::vector<HelperValue> fields;
};

struct LoadedProgram {
  ProgId id;
  EbpfProgram prog;
  std::string map_scope;
  std::optional<LinkId> link;
  std::vector<ChannelRecord> channel;
};

/// The modeled eBPF subsystem: verifier-style load gate, attachment and
/// dispatch. Maps live in scopes (one per object) and are referenced by
/// "<scope>/<name>".
class EbpfRuntime {
 public:
  explicit EbpfRuntime(EventLog *log = nullptr) : log_(log) {}

  Expected<void, LoadError> create_map(const std::string &scope, const MapSpec &spec);

  /// Verifies, checks capabilities, then asks the gate. The program stays
  /// detached.
  Expected<ProgId, LoadError> load_program(const OwnerInfo &owner, EbpfProgram prog,
                                           const LoadGate &gate, const std::string &map_scope = "");

  /// Creates the object's maps and loads every program, all or nothing.
  Expected<std::vector<ProgId>, LoadError> load_object(const OwnerInfo &owner, const BpfObject &obj,
                                                       const LoadGate &gate);

  Expected<LinkId, AttachError> attach(ProgId id, const HookPoint &hook);

  /// Attached programs whose hook observes (phase, syscall), in attach order.
  std::vector<ProgId> attached_for(Phase phase, std::string_view syscall) const;

  /// Runs each program's rules against ctx. Effects are applied and logged
  /// immediately; a failed helper abandons the rest of its rule.
  std::vector<HelperEffect> dispatch(EventContext &ctx, std::span<const ProgId> progs,
                                     KernelServices &kernel);

  const LoadedProgram *program(ProgId id) const;
  const std::vector<LoadedProgram> &programs() const { return programs_; }
  const BpfMap *find_map(const std::string &qualified) const;
  BpfMap *find_map(const std::string &qualified);

 private:
  struct Frame;

  bool evaluate(const Predicate &p, const EventContext &ctx, const LoadedProgram &lp,
                const KernelServices &kernel) const;
  HelperEffect run_helper(const HelperCall &call, EventContext &ctx, LoadedProgram &lp,
                          Frame &frame, KernelServices &kernel);
  void log_effect(const HelperEffect &e);
  std::string qualify(const LoadedProgram &lp, const std::string &map) const;

  EventLog *log_;
  std::vector<LoadedProgram> programs_;  // ProgId n lives at index n-1
  std::map<std::string, BpfMap> maps_;
  std::vector<ProgId> attach_order_;
  std::uint32_t next_link_ = 1;
};

/// JSON rendering of a helper value: numbers stay numbers, bytes become
/// strings with trailing NULs trimmed.
OrderedJson to_json(const HelperValue &v);

}  // namespace ebpfsim::bpf
