/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/bpf/program.hpp"

#include <array>

namespace ebpfsim::bpf {
namespace {

constexpr std::array<std::string_view, kHelperCount> kHelperNames = {
    "get_current_pid_tgid", "get_current_uid_gid", "get_current_comm", "send_signal",
    "probe_read_user",      "probe_read_user_str", "probe_write_user", "override_return",
    "map_update",           "map_lookup",          "map_delete",       "emit_record",
};

bool is_map_helper(Helper h) {
  return h == Helper::MapUpdate || h == Helper::MapLookup || h == Helper::MapDelete;
}

}  // namespace

std::string_view to_string(Helper h) { return kHelperNames[static_cast<std::size_t>(h)]; }

std::optional<Helper> parse_helper(std::string_view text) {
  if (text.substr(0, 4) == "bpf_") text.remove_prefix(4);
  if (text == "map_update_elem") text = "map_update";
  if (text == "map_lookup_elem") text = "map_lookup";
  if (text == "map_delete_elem") text = "map_delete";
  for (std::size_t i = 0; i < kHelperNames.size(); ++i) {
    if (kHelperNames[i] == text) return static_cast<Helper>(i);
  }
  return std::nullopt;
}

const std::vector<Helper> &all_helpers() {
  static const std::vector<Helper> helpers = [] {
    std::vector<Helper> v;
    for (std::size_t i = 0; i < kHelperCount; ++i) v.push_back(static_cast<Helper>(i));
    return v;
  }();
  return helpers;
}

HelperSignature signature(Helper h) {
  switch (h) {
    case Helper::GetCurrentPidTgid:
    case Helper::GetCurrentUidGid:
    case Helper::GetCurrentComm: return {0, 0};
    case Helper::SendSignal:
    case Helper::ProbeReadUserStr:
    case Helper::OverrideReturn: return {1, 1};
    case Helper::ProbeReadUser:
    case Helper::ProbeWriteUser:
    case Helper::MapLookup:
    case Helper::MapDelete: return {2, 2};
    case Helper::MapUpdate: return {3, 3};
    case Helper::EmitRecord: return {2, 8};
  }
  return {0, 0};
}

std::string_view to_string(CtxField f) {
  switch (f) {
    case CtxField::Pid: return "pid";
    case CtxField::Tgid: return "tgid";
    case CtxField::UidGid: return "uid_gid";
    case CtxField::Comm: return "comm";
    case CtxField::Syscall: return "syscall";
    case CtxField::Retval: return "retval";
    case CtxField::UserBuffer: return "user_buffer";
    case CtxField::Filename: return "filename";
    case CtxField::Arg: return "arg";
  }
  return "?";
}

std::optional<CtxField> parse_ctx_field(std::string_view text) {
  for (auto f : {CtxField::Pid, CtxField::Tgid, CtxField::UidGid, CtxField::Comm, CtxField::Syscall,
                 CtxField::Retval, CtxField::UserBuffer, CtxField::Filename, CtxField::Arg}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::string_view to_string(Predicate::Kind k) {
  switch (k) {
    case Predicate::Kind::CommEquals: return "comm_equals";
    case Predicate::Kind::CommContains: return "comm_contains";
    case Predicate::Kind::SyscallEquals: return "syscall_equals";
    case Predicate::Kind::FilenameEndsWith: return "filename_ends_with";
    case Predicate::Kind::PidInMap: return "pid_in_map";
    case Predicate::Kind::PhaseEquals: return "phase_equals";
  }
  return "?";
}

HelperSet implied_helpers(const Predicate &p) {
  switch (p.kind) {
    case Predicate::Kind::CommEquals:
    case Predicate::Kind::CommContains: return {Helper::GetCurrentComm};
    case Predicate::Kind::FilenameEndsWith: return {Helper::ProbeReadUserStr};
    case Predicate::Kind::PidInMap: return {Helper::GetCurrentPidTgid, Helper::MapLookup};
    case Predicate::Kind::SyscallEquals:
    case Predicate::Kind::PhaseEquals: return {};
  }
  return {};
}

HelperSet derive_helpers(const std::vector<Rule> &rules) {
  HelperSet out;
  for (const auto &rule : rules) {
    for (const auto &p : rule.when) out.merge(implied_helpers(p));
    for (const auto &call : rule.actions) out.insert(call.helper);
  }
  return out;
}

std::set<std::string> derive_maps(const std::vector<Rule> &rules) {
  std::set<std::string> out;
  for (const auto &rule : rules) {
    for (const auto &p : rule.when) {
      if (p.kind == Predicate::Kind::PidInMap) out.insert(p.text);
    }
    for (const auto &call : rule.actions) {
      for (const auto &a : call.args) {
        if (a.kind == Operand::Kind::Map) out.insert(a.text);
      }
    }
  }
  return out;
}

void finalize(EbpfProgram &prog) {
  prog.declared_helpers = derive_helpers(prog.rules);
  prog.maps_used = derive_maps(prog.rules);
}

std::string to_string(const HelperSet &helpers) {
  std::string out;
  for (auto h : helpers) {
    if (!out.empty()) out += ',';
    out += to_string(h);
  }
  return out;
}

Expected<void, std::string> verify(const EbpfProgram &prog,
                                   const std::function<bool(const std::string &)> &map_exists) {
  if (prog.id.empty()) return unexpected(std::string("program has no id"));

  auto check_map = [&](const std::string &name) -> Expected<void, std::string> {
    if (!prog.maps_used.contains(name)) {
      return unexpected("map '" + name + "' not listed in maps_used");
    }
    if (!map_exists(name)) return unexpected("map '" + name + "' does not resolve");
    return {};
  };

  for (const auto &name : prog.maps_used) {
    if (!map_exists(name)) return unexpected("map '" + name + "' does not resolve");
  }

  for (std::size_t r = 0; r < prog.rules.size(); ++r) {
    const auto &rule = prog.rules[r];
    const std::string where = prog.id + " rule " + std::to_string(r);

    for (const auto &p : rule.when) {
      switch (p.kind) {
        case Predicate::Kind::SyscallEquals:
          if (!is_known_syscall(p.text)) return unexpected(where + ": unknown syscall '" + p.text + "'");
          break;
        case Predicate::Kind::PidInMap:
          if (auto ok = check_map(p.text); !ok) return unexpected(where + ": " + ok.error());
          break;
        case Predicate::Kind::FilenameEndsWith:
          if (p.text.empty()) return unexpected(where + ": empty filename suffix");
          break;
        default: break;
      }
    }

    std::set<std::string> slots;
    for (const auto &call : rule.actions) {
      const auto sig = signature(call.helper);
      const std::string name(to_string(call.helper));
      if (call.args.size() < sig.min_args || call.args.size() > sig.max_args) {
        return unexpected(where + ": " + name + " takes " + std::to_string(sig.min_args) +
                          (sig.max_args != sig.min_args ? ".." + std::to_string(sig.max_args) : "") +
                          " arguments, got " + std::to_string(call.args.size()));
      }
      for (std::size_t i = 0; i < call.args.size(); ++i) {
        const auto &a = call.args[i];
        const bool map_position = is_map_helper(call.helper) && i == 0;
        if (map_position != (a.kind == Operand::Kind::Map)) {
          return unexpected(where + ": " + name + " argument " + std::to_string(i) +
                            (map_position ? " must name a map" : " cannot be a map"));
        }
        if (a.kind == Operand::Kind::Map) {
          if (auto ok = check_map(a.text); !ok) return unexpected(where + ": " + ok.error());
        }
        if (a.kind == Operand::Kind::Slot && !slots.contains(a.text)) {
          return unexpected(where + ": slot '" + a.text + "' used before it is bound");
        }
      }
      if (call.helper == Helper::EmitRecord && call.args[0].kind != Operand::Kind::Bytes) {
        return unexpected(where + ": emit_record needs a record kind literal first");
      }
      if (call.result_slot) slots.insert(*call.result_slot);
    }
  }

  const auto used = derive_helpers(prog.rules);
  if (used != prog.declared_helpers) {
    return unexpected(prog.id + ": declared helpers {" + to_string(prog.declared_helpers) +
                      "} differ from helpers used {" + to_string(used) + "}");
  }
  return {};
}

}  // namespace ebpfsim::bpf
