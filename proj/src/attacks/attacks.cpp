/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/attacks/attacks.hpp"

#include <algorithm>
#include <map>

namespace ebpfsim::attacks {
namespace {

using bpf::CtxField;
using bpf::Helper;
using bpf::HelperCall;
using bpf::HookPoint;
using bpf::Operand;
using bpf::Predicate;
using bpf::Rule;

HelperCall call(Helper h, std::vector<Operand> args, std::optional<std::string> slot = std::nullopt) {
  return HelperCall{h, std::move(args), std::move(slot)};
}

Operand kind_tag(std::string_view kind) { return Operand::bytes(std::string(kind)); }

bpf::EbpfProgram program(const std::string &attack, const std::string &name, const ContainerId &owner,
                         HookPoint hook, std::vector<Rule> rules) {
  bpf::EbpfProgram p;
  p.id = attack + ":" + name;
  p.owner = owner;
  p.hook = std::move(hook);
  p.rules = std::move(rules);
  bpf::finalize(p);
  return p;
}

HookPoint exit_hook_for(ExitHook h, const std::string &syscall) {
  return h == ExitHook::Kretprobe ? HookPoint::kretprobe(syscall) : HookPoint::sys_exit(syscall);
}

bpf::MapSpec pid_map(std::string name) {
  return bpf::MapSpec{std::move(name), bpf::KeyType::U32, bpf::ValueType::U64, bpf::kDefaultMapCapacity};
}

kernel::WorkloadStep step(kernel::WorkloadStep::Op op) {
  kernel::WorkloadStep s;
  s.op = op;
  return s;
}

kernel::WorkloadStep path_step(kernel::WorkloadStep::Op op, std::string path) {
  auto s = step(op);
  s.path = std::move(path);
  return s;
}

}  // namespace

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Tracing: return "tracing";
    case AttackKind::Dos: return "dos";
    case AttackKind::InfoTheft: return "info_theft";
    case AttackKind::BashInjection: return "bash_injection";
  }
  return "?";
}

std::optional<AttackKind> parse_attack_kind(std::string_view text) {
  for (auto k : all_attack_kinds()) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

const std::vector<AttackKind> &all_attack_kinds() {
  static const std::vector<AttackKind> kinds{AttackKind::Tracing, AttackKind::Dos, AttackKind::InfoTheft,
                                             AttackKind::BashInjection};
  return kinds;
}

bpf::EbpfProgram build_tracing(const std::string &id, const ContainerId &owner) {
  Rule r;
  r.actions = {
      call(Helper::GetCurrentPidTgid, {}, "pid_tgid"),
      call(Helper::GetCurrentUidGid, {}, "uid_gid"),
      call(Helper::GetCurrentComm, {}, "comm"),
      call(Helper::EmitRecord,
           {kind_tag(kProcessInfo), Operand::slot("pid_tgid"), Operand::slot("uid_gid"), Operand::slot("comm")}),
  };
  return program(id, "trace_enter", owner, HookPoint::sys_enter(), {std::move(r)});
}

Expected<bpf::EbpfProgram, std::string> build_dos(const std::string &id, const ContainerId &owner,
                                                  const std::string &target_comm) {
  if (target_comm.empty() || target_comm.size() > Comm::kSize - 1) {
    return unexpected("target comm must be 1.." + std::to_string(Comm::kSize - 1) + " bytes");
  }
  Rule r;
  r.when = {Predicate::comm_equals(target_comm)};
  r.actions = {
      call(Helper::SendSignal, {Operand::u64(9)}),
      call(Helper::EmitRecord, {kind_tag(kKillReport), Operand::ctx(CtxField::Pid), Operand::bytes(target_comm)}),
  };
  return program(id, "kill_on_read", owner, HookPoint::kprobe("read"), {std::move(r)});
}

Expected<bpf::BpfObject, std::string> build_info_theft(const std::string &id, const ContainerId &owner,
                                                       const std::string &filename_suffix, ExitHook exit_hook) {
  if (filename_suffix.empty()) return unexpected(std::string("filename suffix is empty"));
  bpf::BpfObject obj;
  obj.id = id;
  obj.maps.push_back(pid_map("watch"));

  Rule detect;
  detect.when = {Predicate::filename_ends_with(filename_suffix)};
  detect.actions = {call(Helper::MapUpdate, {Operand::map("watch"), Operand::ctx(CtxField::Pid), Operand::u64(1)})};
  obj.programs.push_back(program(id, "open_detect", owner, HookPoint::kprobe("openat"), {std::move(detect)}));

  Rule intercept;
  intercept.when = {Predicate::pid_in_map("watch")};
  intercept.actions = {
      call(Helper::ProbeReadUser, {Operand::ctx(CtxField::UserBuffer), Operand::ctx(CtxField::Retval)}, "data"),
      call(Helper::EmitRecord, {kind_tag(kFileContent), Operand::ctx(CtxField::Pid), Operand::slot("data")}),
  };
  obj.programs.push_back(program(id, "read_intercept", owner, exit_hook_for(exit_hook, "read"), {std::move(intercept)}));

  Rule forget;
  forget.when = {Predicate::pid_in_map("watch")};
  forget.actions = {call(Helper::MapDelete, {Operand::map("watch"), Operand::ctx(CtxField::Pid)})};
  obj.programs.push_back(program(id, "close_forget", owner, HookPoint::kprobe("close"), {std::move(forget)}));
  return obj;
}

Expected<bpf::BpfObject, std::string> build_bash_injection(const std::string &id, const ContainerId &owner,
                                                           const std::string &script_path, const Bytes &payload,
                                                           ExitHook exit_hook) {
  if (script_path.empty()) return unexpected(std::string("script path is empty"));
  if (payload.empty()) return unexpected(std::string("payload is empty"));
  bpf::BpfObject obj;
  obj.id = id;
  obj.maps.push_back(pid_map("targets"));
  obj.maps.push_back(pid_map("buffers"));

  Rule match;
  match.when = {Predicate::filename_ends_with(script_path)};
  match.actions = {call(Helper::MapUpdate, {Operand::map("targets"), Operand::ctx(CtxField::Pid), Operand::u64(1)})};
  obj.programs.push_back(program(id, "exec_match", owner, HookPoint::kprobe("execve"), {std::move(match)}));

  Rule save;
  save.when = {Predicate::pid_in_map("targets")};
  save.actions = {call(Helper::MapUpdate,
                       {Operand::map("buffers"), Operand::ctx(CtxField::Pid), Operand::ctx(CtxField::UserBuffer)})};
  obj.programs.push_back(program(id, "read_save_buf", owner, HookPoint::kprobe("read"), {std::move(save)}));

  Rule inject;
  inject.when = {Predicate::pid_in_map("buffers")};
  inject.actions = {
      call(Helper::MapLookup, {Operand::map("buffers"), Operand::ctx(CtxField::Pid)}, "buf"),
      call(Helper::ProbeWriteUser, {Operand::slot("buf"), Operand::bytes(payload)}),
      call(Helper::OverrideReturn, {Operand::u64(payload.size())}),
      call(Helper::EmitRecord, {kind_tag(kInjectionReport), Operand::ctx(CtxField::Pid), Operand::bytes(payload)}),
      call(Helper::MapDelete, {Operand::map("targets"), Operand::ctx(CtxField::Pid)}),
      call(Helper::MapDelete, {Operand::map("buffers"), Operand::ctx(CtxField::Pid)}),
  };
  obj.programs.push_back(program(id, "read_inject", owner, exit_hook_for(exit_hook, "read"), {std::move(inject)}));
  return obj;
}

Expected<bpf::BpfObject, std::string> build_object(const AttackSpec &spec) {
  const auto &p = spec.params;
  switch (spec.kind) {
    case AttackKind::Tracing: return bpf::BpfObject{spec.id, {}, {build_tracing(spec.id, spec.owner)}};
    case AttackKind::Dos: {
      auto prog = build_dos(spec.id, spec.owner, p.target_comm);
      if (!prog) return unexpected(prog.error());
      return bpf::BpfObject{spec.id, {}, {std::move(*prog)}};
    }
    case AttackKind::InfoTheft: return build_info_theft(spec.id, spec.owner, p.filename_suffix, p.exit_hook);
    case AttackKind::BashInjection:
      return build_bash_injection(spec.id, spec.owner, p.script_path, p.payload, p.exit_hook);
  }
  return unexpected(std::string("unknown attack kind"));
}

kernel::Workload loader_workload(const AttackSpec &spec) {
  auto load = step(kernel::WorkloadStep::Op::BpfLoad);
  load.object = spec.id;
  auto idle = step(kernel::WorkloadStep::Op::Sleep);
  idle.ticks = 10;
  return kernel::Workload{"loader-" + spec.id, {load, idle}, true, 1, 1};
}

std::string ExfilRecord::to_line() const {
  OrderedJson j;
  j["tick"] = tick;
  j["kind"] = kind;
  j["pid"] = pid;
  j["data"] = data;
  return dump_compact(j);
}

std::vector<ExfilRecord> exfil(const bpf::EbpfRuntime &rt, const std::string &attack_id) {
  std::vector<ExfilRecord> out;
  for (const auto &lp : rt.programs()) {
    if (lp.map_scope != attack_id) continue;
    for (const auto &rec : lp.channel) {
      ExfilRecord e;
      e.tick = rec.tick;
      e.kind = rec.kind;
      if (!rec.fields.empty()) {
        if (const auto *n = std::get_if<std::uint64_t>(&rec.fields.front())) {
          // pid_tgid carries the tgid in the upper half.
          e.pid = rec.kind == kProcessInfo ? (*n & 0xffffffffULL) : *n;
        }
        if (const auto *b = std::get_if<Bytes>(&rec.fields.back())) {
          e.data = rec.kind == kProcessInfo ? b->substr(0, b->find('\0')) : *b;
        }
      }
      out.push_back(std::move(e));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.tick < b.tick; });
  return out;
}

std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Succeeded: return "Succeeded";
    case OutcomeKind::BlockedAtLoad: return "BlockedAtLoad";
    case OutcomeKind::Degraded: return "Degraded";
    case OutcomeKind::NotRun: return "NotRun";
  }
  return "?";
}

std::string Outcome::to_string() const {
  auto s = std::string(attacks::to_string(kind));
  if (!reason.empty()) s += "(" + reason + ")";
  return s;
}

Outcome assess(const AttackSpec &spec, const EventLog &log, const bpf::EbpfRuntime &rt) {
  const LogRecord *load = nullptr;
  bool attach_failed = false;
  std::map<std::uint64_t, ContainerId> pid_container;
  for (const auto &r : log.records()) {
    if (r.kind == "spawn") pid_container[r.pid] = r.container;
    if (r.kind == "bpf_load" && r.detail.value("object", "") == spec.id) load = &r;
    if (r.kind == "bpf_attach" && !r.detail.value("ok", true) &&
        r.detail.value("prog", "").rfind(spec.id + ":", 0) == 0) {
      attach_failed = true;
    }
  }
  if (load == nullptr) return {OutcomeKind::NotRun, {}};
  if (!load->detail.value("ok", false)) return {OutcomeKind::BlockedAtLoad, load->detail.value("error", "")};
  if (attach_failed) return {OutcomeKind::Degraded, "attach failed"};

  const auto records = exfil(rt, spec.id);
  auto count = [&](std::string_view kind, auto &&pred) {
    return std::count_if(records.begin(), records.end(),
                         [&](const ExfilRecord &e) { return e.kind == kind && pred(e); });
  };
  std::ptrdiff_t evidence = 0;
  switch (spec.kind) {
    case AttackKind::Tracing:
      evidence = count(kProcessInfo, [&](const ExfilRecord &e) {
        auto it = pid_container.find(e.pid);
        return it != pid_container.end() && it->second != spec.owner;
      });
      break;
    case AttackKind::Dos: evidence = count(kKillReport, [](const ExfilRecord &) { return true; }); break;
    case AttackKind::InfoTheft:
      evidence = count(kFileContent, [](const ExfilRecord &e) { return !e.data.empty(); });
      break;
    case AttackKind::BashInjection:
      evidence = count(kInjectionReport, [](const ExfilRecord &) { return true; });
      break;
  }
  if (evidence > 0) return {OutcomeKind::Succeeded, {}};
  return {OutcomeKind::Degraded, "no effect observed"};
}

kernel::Workload heartbeat_workload(const std::string &id, const std::string &config_path) {
  using Op = kernel::WorkloadStep::Op;
  auto nap = step(Op::Sleep);
  nap.ticks = 3;
  return kernel::Workload{id, {path_step(Op::Openat, config_path), step(Op::Read), step(Op::Close), nap}, true, 1, 0};
}

kernel::Workload ssh_login_workload(const std::string &id, const std::string &key_path) {
  using Op = kernel::WorkloadStep::Op;
  auto idle = step(Op::Sleep);
  idle.ticks = 10;
  return kernel::Workload{id, {path_step(Op::Openat, key_path), step(Op::Read), step(Op::Close), idle}, true, 1, 3};
}

kernel::Workload bash_workload(const std::string &id, const std::string &script_path) {
  using Op = kernel::WorkloadStep::Op;
  auto idle = step(Op::Sleep);
  idle.ticks = 10;
  return kernel::Workload{id,
                          {path_step(Op::Execve, script_path), path_step(Op::Openat, script_path), step(Op::Read),
                           step(Op::Interpret), step(Op::Close), idle},
                          true,
                          1,
                          5};
}

}  // namespace ebpfsim::attacks
