/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/bpf/runtime.hpp"

#include <algorithm>
#include <unordered_map>

#include "ebpfsim/core/util.hpp"

namespace ebpfsim::bpf {

std::string_view to_string(FillState s) {
  switch (s) {
    case FillState::Empty: return "Empty";
    case FillState::Filled: return "Filled";
    case FillState::Overwritten: return "Overwritten";
  }
  return "?";
}

std::string_view to_string(HelperError e) {
  switch (e) {
    case HelperError::BufferEmpty: return "BufferEmpty";
    case HelperError::BadAddress: return "BadAddress";
    case HelperError::TooBig: return "TooBig";
    case HelperError::InvalidSignal: return "InvalidSignal";
    case HelperError::InvalidPhase: return "InvalidPhase";
    case HelperError::OverrideConflict: return "OverrideConflict";
    case HelperError::MapFull: return "MapFull";
    case HelperError::KeyNotFound: return "KeyNotFound";
    case HelperError::TypeMismatch: return "TypeMismatch";
    case HelperError::InvalidArgument: return "InvalidArgument";
  }
  return "?";
}

std::optional<UserPtr> EventContext::filename_arg() const {
  std::size_t index = 0;
  if (syscall == "openat") {
    index = 1;
  } else if (syscall != "execve") {
    return std::nullopt;
  }
  if (index >= args.size()) return std::nullopt;
  if (const auto *p = std::get_if<UserPtr>(&args[index])) return *p;
  return std::nullopt;
}

std::string_view to_string(LoadErrorKind k) {
  switch (k) {
    case LoadErrorKind::CapabilityDenied: return "CapabilityDenied";
    case LoadErrorKind::HookDenied: return "HookDenied";
    case LoadErrorKind::HelperDenied: return "HelperDenied";
    case LoadErrorKind::MalformedProgram: return "MalformedProgram";
  }
  return "?";
}

std::string LoadError::to_string() const {
  std::string out(bpf::to_string(kind));
  if (!subject.empty()) out += ": " + subject;
  return out;
}

std::string_view to_string(AttachError e) {
  switch (e) {
    case AttachError::NotLoaded: return "NotLoaded";
    case AttachError::HookMismatch: return "HookMismatch";
    case AttachError::AlreadyAttached: return "AlreadyAttached";
  }
  return "?";
}

bool can_load_programs(const CapabilitySet &caps) {
  return caps.contains(Capability::SysAdmin) || caps.contains(Capability::Bpf);
}

OrderedJson to_json(const HelperValue &v) {
  if (const auto *n = std::get_if<std::uint64_t>(&v)) return *n;
  if (const auto *b = std::get_if<Bytes>(&v)) {
    std::string_view s(*b);
    while (!s.empty() && s.back() == '\0') s.remove_suffix(1);
    return std::string(s);
  }
  return nullptr;
}

struct EbpfRuntime::Frame {
  std::unordered_map<std::string, HelperValue> slots;
};

Expected<void, LoadError> EbpfRuntime::create_map(const std::string &scope, const MapSpec &spec) {
  const std::string id = scope.empty() ? spec.name : scope + "/" + spec.name;
  if (spec.capacity == 0) return unexpected(LoadError{LoadErrorKind::MalformedProgram, "map '" + id + "' has zero capacity"});
  if (maps_.contains(id)) return unexpected(LoadError{LoadErrorKind::MalformedProgram, "map '" + id + "' already exists"});
  maps_.emplace(id, BpfMap(id, spec));
  return {};
}

Expected<ProgId, LoadError> EbpfRuntime::load_program(const OwnerInfo &owner, EbpfProgram prog,
                                                      const LoadGate &gate,
                                                      const std::string &map_scope) {
  auto qualify_name = [&](const std::string &m) { return map_scope.empty() ? m : map_scope + "/" + m; };
  if (!prog.owner.empty() && prog.owner != owner.id) {
    return unexpected(LoadError{LoadErrorKind::MalformedProgram,
                                prog.id + ": owner '" + prog.owner + "' is not the loading container"});
  }
  prog.owner = owner.id;

  if (auto ok = verify(prog, [&](const std::string &m) { return maps_.contains(qualify_name(m)); }); !ok) {
    return unexpected(LoadError{LoadErrorKind::MalformedProgram, ok.error()});
  }
  if (!can_load_programs(owner.caps)) return unexpected(LoadError{LoadErrorKind::CapabilityDenied, ""});
  if (auto ok = gate.check(owner, prog); !ok) return unexpected(ok.error());

  const ProgId id(static_cast<std::uint32_t>(programs_.size() + 1));
  programs_.push_back(LoadedProgram{id, std::move(prog), map_scope, std::nullopt, {}});
  return id;
}

Expected<std::vector<ProgId>, LoadError> EbpfRuntime::load_object(const OwnerInfo &owner,
                                                                  const BpfObject &obj,
                                                                  const LoadGate &gate) {
  std::vector<std::string> created;
  const std::size_t first = programs_.size();
  auto rollback = [&] {
    for (const auto &m : created) maps_.erase(m);
    programs_.resize(first);
  };

  for (const auto &spec : obj.maps) {
    if (auto ok = create_map(obj.id, spec); !ok) {
      rollback();
      return unexpected(ok.error());
    }
    created.push_back(obj.id + "/" + spec.name);
  }
  std::vector<ProgId> ids;
  for (const auto &prog : obj.programs) {
    auto id = load_program(owner, prog, gate, obj.id);
    if (!id) {
      rollback();
      return unexpected(id.error());
    }
    ids.push_back(*id);
  }
  return ids;
}

Expected<LinkId, AttachError> EbpfRuntime::attach(ProgId id, const HookPoint &hook) {
  if (id.value() == 0 || id.value() > programs_.size()) return unexpected(AttachError::NotLoaded);
  auto &lp = programs_[id.value() - 1];
  if (!(lp.prog.hook == hook)) return unexpected(AttachError::HookMismatch);
  if (lp.link) return unexpected(AttachError::AlreadyAttached);
  lp.link = LinkId(next_link_++);
  attach_order_.push_back(id);
  return *lp.link;
}

std::vector<ProgId> EbpfRuntime::attached_for(Phase phase, std::string_view syscall) const {
  std::vector<ProgId> out;
  for (auto id : attach_order_) {
    if (programs_[id.value() - 1].prog.hook.matches(phase, syscall)) out.push_back(id);
  }
  return out;
}

const LoadedProgram *EbpfRuntime::program(ProgId id) const {
  if (id.value() == 0 || id.value() > programs_.size()) return nullptr;
  return &programs_[id.value() - 1];
}

const BpfMap *EbpfRuntime::find_map(const std::string &qualified) const {
  auto it = maps_.find(qualified);
  return it == maps_.end() ? nullptr : &it->second;
}

BpfMap *EbpfRuntime::find_map(const std::string &qualified) {
  auto it = maps_.find(qualified);
  return it == maps_.end() ? nullptr : &it->second;
}

std::string EbpfRuntime::qualify(const LoadedProgram &lp, const std::string &map) const {
  return lp.map_scope.empty() ? map : lp.map_scope + "/" + map;
}

bool EbpfRuntime::evaluate(const Predicate &p, const EventContext &ctx, const LoadedProgram &lp,
                           const KernelServices &kernel) const {
  switch (p.kind) {
    case Predicate::Kind::CommEquals: return ctx.comm.view() == p.text;
    case Predicate::Kind::CommContains: return ctx.comm.view().find(p.text) != std::string_view::npos;
    case Predicate::Kind::SyscallEquals: return ctx.syscall == p.text;
    case Predicate::Kind::PhaseEquals: return ctx.phase == p.phase;
    case Predicate::Kind::FilenameEndsWith: {
      auto ptr = ctx.filename_arg();
      if (!ptr) return false;
      auto path = kernel.read_user_str(ctx.pid, *ptr);
      return path && ends_with(*path, p.text);
    }
    case Predicate::Kind::PidInMap: {
      const auto *map = find_map(qualify(lp, p.text));
      return map != nullptr && map->lookup(MapScalar(std::uint64_t{ctx.pid.value()})).has_value();
    }
  }
  return false;
}

namespace {

HelperError from_map_error(MapError e) {
  switch (e) {
    case MapError::Full: return HelperError::MapFull;
    case MapError::NotFound: return HelperError::KeyNotFound;
    case MapError::KeyTypeMismatch:
    case MapError::ValueTypeMismatch: return HelperError::TypeMismatch;
  }
  return HelperError::InvalidArgument;
}

}  // namespace

HelperEffect EbpfRuntime::run_helper(const HelperCall &call, EventContext &ctx, LoadedProgram &lp,
                                     Frame &frame, KernelServices &kernel) {
  HelperEffect e;
  e.tick = kernel.now();
  e.prog = lp.id;
  e.program = lp.prog.id;
  e.owner = lp.prog.owner;
  e.helper = call.helper;
  e.phase = ctx.phase;
  e.syscall = ctx.syscall;
  e.syscall_seq = ctx.syscall_seq;
  e.pid = ctx.pid;
  e.container = ctx.container;

  // Resolve operands first; any failure becomes the call's error.
  std::vector<HelperValue> args;
  for (const auto &op : call.args) {
    switch (op.kind) {
      case Operand::Kind::U64: args.emplace_back(op.number); break;
      case Operand::Kind::Bytes: args.emplace_back(op.text); break;
      case Operand::Kind::Map: args.emplace_back(op.text); break;
      case Operand::Kind::Slot: {
        auto it = frame.slots.find(op.text);
        if (it == frame.slots.end()) {
          e.error = HelperError::InvalidArgument;
          return e;
        }
        args.push_back(it->second);
        break;
      }
      case Operand::Kind::Ctx: {
        switch (op.field) {
          case CtxField::Pid: args.emplace_back(std::uint64_t{ctx.pid.value()}); break;
          case CtxField::Tgid: args.emplace_back(std::uint64_t{ctx.tgid}); break;
          case CtxField::UidGid: args.emplace_back(ctx.uid_gid()); break;
          case CtxField::Comm: args.emplace_back(ctx.comm.raw()); break;
          case CtxField::Syscall: args.emplace_back(ctx.syscall); break;
          case CtxField::Retval: args.emplace_back(static_cast<std::uint64_t>(ctx.natural_retval)); break;
          case CtxField::UserBuffer:
          case CtxField::Filename: {
            auto ptr = op.field == CtxField::UserBuffer ? ctx.user_buffer : ctx.filename_arg();
            if (!ptr) {
              e.error = HelperError::InvalidArgument;
              return e;
            }
            args.emplace_back(ptr->addr);
            break;
          }
          case CtxField::Arg: {
            if (op.number >= ctx.args.size()) {
              e.error = HelperError::InvalidArgument;
              return e;
            }
            const auto &a = ctx.args[op.number];
            if (const auto *i = std::get_if<std::int64_t>(&a)) {
              args.emplace_back(static_cast<std::uint64_t>(*i));
            } else {
              args.emplace_back(std::get<UserPtr>(a).addr);
            }
            break;
          }
        }
        break;
      }
    }
  }

  auto number = [&](std::size_t i) -> std::optional<std::uint64_t> {
    if (const auto *n = std::get_if<std::uint64_t>(&args[i])) return *n;
    return std::nullopt;
  };
  auto bytes = [&](std::size_t i) -> std::optional<Bytes> {
    if (const auto *b = std::get_if<Bytes>(&args[i])) return *b;
    return std::nullopt;
  };
  auto scalar = [&](std::size_t i) -> std::optional<MapScalar> {
    if (const auto *n = std::get_if<std::uint64_t>(&args[i])) return MapScalar(*n);
    if (const auto *b = std::get_if<Bytes>(&args[i])) return MapScalar(*b);
    return std::nullopt;
  };
  auto fail = [&](HelperError err) {
    e.error = err;
    return e;
  };

  switch (call.helper) {
    case Helper::GetCurrentPidTgid: e.result = ctx.pid_tgid(); break;
    case Helper::GetCurrentUidGid: e.result = ctx.uid_gid(); break;
    case Helper::GetCurrentComm: e.result = ctx.comm.raw(); break;
    case Helper::SendSignal: {
      auto signo = number(0);
      if (!signo) return fail(HelperError::TypeMismatch);
      if (*signo != 9 && *signo != 15) return fail(HelperError::InvalidSignal);
      e.result = *signo;
      break;
    }
    case Helper::ProbeReadUser: {
      auto addr = number(0);
      auto len = number(1);
      if (!addr || !len) return fail(HelperError::TypeMismatch);
      if (*len == 0 || static_cast<std::int64_t>(*len) < 0) return fail(HelperError::InvalidArgument);
      auto data = kernel.read_user(ctx.pid, UserPtr{*addr}, *len);
      if (!data) return fail(data.error());
      e.result = std::move(*data);
      break;
    }
    case Helper::ProbeReadUserStr: {
      auto addr = number(0);
      if (!addr) return fail(HelperError::TypeMismatch);
      auto data = kernel.read_user_str(ctx.pid, UserPtr{*addr});
      if (!data) return fail(data.error());
      e.result = std::move(*data);
      break;
    }
    case Helper::ProbeWriteUser: {
      auto addr = number(0);
      auto data = bytes(1);
      if (!addr || !data) return fail(HelperError::TypeMismatch);
      if (ctx.phase != Phase::Exit) return fail(HelperError::InvalidPhase);
      auto before = kernel.write_user(ctx.pid, UserPtr{*addr}, *data);
      if (!before) return fail(before.error());
      e.fill_before = *before;
      e.result = static_cast<std::uint64_t>(data->size());
      break;
    }
    case Helper::OverrideReturn: {
      auto value = number(0);
      if (!value) return fail(HelperError::TypeMismatch);
      if (ctx.phase != Phase::Exit) return fail(HelperError::InvalidPhase);
      if (ctx.posted_override) return fail(HelperError::OverrideConflict);
      ctx.posted_override = static_cast<std::int64_t>(*value);
      e.result = *value;
      break;
    }
    case Helper::MapUpdate:
    case Helper::MapLookup:
    case Helper::MapDelete: {
      auto *map = find_map(qualify(lp, std::get<Bytes>(args[0])));
      auto key = scalar(1);
      if (map == nullptr) return fail(HelperError::InvalidArgument);
      if (!key) return fail(HelperError::TypeMismatch);
      if (call.helper == Helper::MapUpdate) {
        auto value = scalar(2);
        if (!value) return fail(HelperError::TypeMismatch);
        if (auto ok = map->update(*key, *value); !ok) return fail(from_map_error(ok.error()));
      } else if (call.helper == Helper::MapLookup) {
        auto found = map->lookup(*key);
        if (!found) return fail(from_map_error(found.error()));
        if (const auto *n = std::get_if<std::uint64_t>(&*found)) {
          e.result = *n;
        } else {
          e.result = std::get<Bytes>(*found);
        }
      } else {
        if (auto ok = map->erase(*key); !ok) return fail(from_map_error(ok.error()));
      }
      break;
    }
    case Helper::EmitRecord: {
      auto kind = bytes(0);
      if (!kind) return fail(HelperError::TypeMismatch);
      ChannelRecord rec{e.tick, lp.prog.id, *kind, {args.begin() + 1, args.end()}};
      lp.channel.push_back(std::move(rec));
      break;
    }
  }

  if (call.result_slot) frame.slots[*call.result_slot] = e.result;
  return e;
}

void EbpfRuntime::log_effect(const HelperEffect &e) {
  if (log_ == nullptr) return;
  OrderedJson d;
  d["prog"] = e.program;
  d["owner"] = e.owner;
  d["helper"] = std::string(to_string(e.helper));
  d["phase"] = std::string(to_string(e.phase));
  d["syscall"] = e.syscall;
  d["sc"] = e.syscall_seq;
  d["ok"] = e.ok();
  if (e.error) d["error"] = std::string(to_string(*e.error));
  if (e.fill_before) d["fill_before"] = std::string(to_string(*e.fill_before));
  if (e.ok() && e.helper == Helper::EmitRecord) {
    const auto &rec = programs_[e.prog.value() - 1].channel.back();
    OrderedJson fields = OrderedJson::array();
    for (const auto &f : rec.fields) fields.push_back(to_json(f));
    d["record"] = {{"kind", rec.kind}, {"fields", fields}};
  } else if (!std::holds_alternative<std::monostate>(e.result)) {
    d["result"] = to_json(e.result);
  }
  log_->append(e.tick, "helper", e.pid.value(), e.container, std::move(d));
}

std::vector<HelperEffect> EbpfRuntime::dispatch(EventContext &ctx, std::span<const ProgId> progs,
                                                KernelServices &kernel) {
  std::vector<HelperEffect> effects;
  for (auto id : progs) {
    auto &lp = programs_.at(id.value() - 1);
    if (log_ != nullptr) {
      OrderedJson d;
      d["prog"] = lp.prog.id;
      d["owner"] = lp.prog.owner;
      d["hook"] = lp.prog.hook.canonical_name();
      d["phase"] = std::string(to_string(ctx.phase));
      d["syscall"] = ctx.syscall;
      d["sc"] = ctx.syscall_seq;
      log_->append(kernel.now(), "hook", ctx.pid.value(), ctx.container, std::move(d));
    }

    Frame frame;
    for (const auto &rule : lp.prog.rules) {
      const bool match = std::all_of(rule.when.begin(), rule.when.end(), [&](const Predicate &p) {
        return evaluate(p, ctx, lp, kernel);
      });
      if (!match) continue;

      frame.slots.clear();
      bool failed = false;
      for (const auto &call : rule.actions) {
        auto effect = run_helper(call, ctx, lp, frame, kernel);
        log_effect(effect);
        const bool ok = effect.ok();
        const bool signal = ok && effect.helper == Helper::SendSignal;
        const int signo = signal ? static_cast<int>(std::get<std::uint64_t>(effect.result)) : 0;
        effects.push_back(std::move(effect));
        if (signal) kernel.send_signal(ctx.pid, signo, lp.prog.id);
        if (!ok) {
          failed = true;
          break;
        }
      }
      if (!failed && rule.then == RuleFlow::Stop) break;
    }
  }
  return effects;
}

}  // namespace ebpfsim::bpf
