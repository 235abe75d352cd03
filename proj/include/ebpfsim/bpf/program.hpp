/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ebpfsim/bpf/hook.hpp"
#include "ebpfsim/bpf/map.hpp"
#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/core/types.hpp"

namespace ebpfsim::bpf {

/// Helper functions, declared in canonical order. Deny reasons and helper
/// sets are always reported in this order.
enum class Helper : std::uint8_t {
  GetCurrentPidTgid,
  GetCurrentUidGid,
  GetCurrentComm,
  SendSignal,
  ProbeReadUser,
  ProbeReadUserStr,
  ProbeWriteUser,
  OverrideReturn,
  MapUpdate,
  MapLookup,
  MapDelete,
  EmitRecord,
};
inline constexpr std::size_t kHelperCount = 12;

std::string_view to_string(Helper h);
/// Accepts both "probe_write_user" and "bpf_probe_write_user".
std::optional<Helper> parse_helper(std::string_view text);
const std::vector<Helper> &all_helpers();

struct HelperSignature {
  std::size_t min_args;
  std::size_t max_args;
};
HelperSignature signature(Helper h);

using HelperSet = std::set<Helper>;

enum class CtxField { Pid, Tgid, UidGid, Comm, Syscall, Retval, UserBuffer, Filename, Arg };

std::string_view to_string(CtxField f);
std::optional<CtxField> parse_ctx_field(std::string_view text);

/// A helper argument: a literal, a field of the event context, the result of
/// an earlier call in the same rule (a "slot"), or a map name.
struct Operand {
  enum class Kind { U64, Bytes, Ctx, Slot, Map };

  Kind kind = Kind::U64;
  std::uint64_t number = 0;  // U64 literal, or the index for CtxField::Arg
  std::string text;          // Bytes literal, slot name or map name
  CtxField field = CtxField::Pid;

  static Operand u64(std::uint64_t v) { return {Kind::U64, v, {}, CtxField::Pid}; }
  static Operand bytes(std::string v) { return {Kind::Bytes, 0, std::move(v), CtxField::Pid}; }
  static Operand ctx(CtxField f) { return {Kind::Ctx, 0, {}, f}; }
  static Operand arg(std::uint64_t index) { return {Kind::Ctx, index, {}, CtxField::Arg}; }
  static Operand slot(std::string name) { return {Kind::Slot, 0, std::move(name), CtxField::Pid}; }
  static Operand map(std::string name) { return {Kind::Map, 0, std::move(name), CtxField::Pid}; }

  friend bool operator==(const Operand &, const Operand &) = default;
};

struct HelperCall {
  Helper helper;
  std::vector<Operand> args;
  /// When set, the helper's return value is bound to this slot name.
  std::optional<std::string> result_slot;
};

struct Predicate {
  enum class Kind { CommEquals, CommContains, SyscallEquals, FilenameEndsWith, PidInMap, PhaseEquals };

  Kind kind;
  std::string text;  // comm, syscall name, suffix or map name
  Phase phase = Phase::Enter;

  static Predicate comm_equals(std::string s) { return {Kind::CommEquals, std::move(s)}; }
  static Predicate comm_contains(std::string s) { return {Kind::CommContains, std::move(s)}; }
  static Predicate syscall_equals(std::string s) { return {Kind::SyscallEquals, std::move(s)}; }
  static Predicate filename_ends_with(std::string s) {
    return {Kind::FilenameEndsWith, std::move(s)};
  }
  static Predicate pid_in_map(std::string map) { return {Kind::PidInMap, std::move(map)}; }
  static Predicate phase_equals(Phase p) { return {Kind::PhaseEquals, {}, p}; }
};

std::string_view to_string(Predicate::Kind k);

enum class RuleFlow { Continue, Stop };

/// when (conjunction) -> do (ordered helper calls) -> then.
struct Rule {
  std::vector<Predicate> when;
  std::vector<HelperCall> actions;
  RuleFlow then = RuleFlow::Continue;
};

struct EbpfProgram {
  std::string id;
  ContainerId owner;
  HookPoint hook = HookPoint::sys_enter();
  std::vector<Rule> rules;
  HelperSet declared_helpers;
  std::set<std::string> maps_used;
};

/// A loadable unit bundling programs with the maps they share, the way a
/// compiled .bpf.o does.
struct BpfObject {
  std::string id;
  std::vector<MapSpec> maps;
  std::vector<EbpfProgram> programs;
};

/// Helpers a predicate needs at run time: reading the comm needs
/// get_current_comm, dereferencing a filename needs probe_read_user_str,
/// and a map membership test needs the pid and a lookup.
HelperSet implied_helpers(const Predicate &p);
/// Everything the rules use, predicates included.
HelperSet derive_helpers(const std::vector<Rule> &rules);
std::set<std::string> derive_maps(const std::vector<Rule> &rules);

/// Fills declared_helpers and maps_used from the rules.
void finalize(EbpfProgram &prog);

/// Structural checks done at load time: arity, operand kinds, slot
/// data flow, map resolution and the declared helper set.
Expected<void, std::string> verify(const EbpfProgram &prog,
                                   const std::function<bool(const std::string &)> &map_exists);

/// Renders a helper set as comma separated canonical names.
std::string to_string(const HelperSet &helpers);

}  // namespace ebpfsim::bpf
