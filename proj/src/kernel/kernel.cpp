/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/kernel/kernel.hpp"

#include <algorithm>
#include <sstream>

namespace ebpfsim::kernel {
namespace {

constexpr std::uint64_t kUserBase = 0x7f0000000000ULL;
constexpr std::int64_t kBpfObjLoadAttach = 100;

OrderedJson render_args(const std::vector<bpf::SyscallArg> &args) {
  OrderedJson out = OrderedJson::array();
  for (const auto &a : args) {
    if (const auto *i = std::get_if<std::int64_t>(&a)) {
      out.push_back(*i);
    } else {
      std::ostringstream s;
      s << "0x" << std::hex << std::get<bpf::UserPtr>(a).addr;
      out.push_back(s.str());
    }
  }
  return out;
}

std::int64_t int_arg(const SyscallRequest &req, std::size_t i) {
  if (i >= req.args.size()) return -1;
  if (const auto *v = std::get_if<std::int64_t>(&req.args[i])) return *v;
  return -1;
}

std::optional<bpf::UserPtr> ptr_arg(const SyscallRequest &req, std::size_t i) {
  if (i >= req.args.size()) return std::nullopt;
  if (const auto *p = std::get_if<bpf::UserPtr>(&req.args[i])) return *p;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ProcessState s) {
  switch (s) {
    case ProcessState::Running: return "Running";
    case ProcessState::Killed: return "Killed";
    case ProcessState::Exited: return "Exited";
  }
  return "?";
}

std::string_view to_string(SignalResult r) {
  switch (r) {
    case SignalResult::Delivered: return "Delivered";
    case SignalResult::Ignored: return "Ignored";
    case SignalResult::Invalid: return "Invalid";
  }
  return "?";
}

std::string_view to_string(SpawnError e) {
  return e == SpawnError::UnknownContainer ? "unknown-container" : "unknown-workload";
}

Kernel::Kernel(KernelConfig config, const bpf::LoadGate *gate)
    : gate_(gate != nullptr ? gate : &default_gate_),
      effective_caps_(std::move(config.effective_caps)),
      orchestrator_(config.orchestrator) {}

// ---------------------------------------------------------------------------
// Setup

Expected<NamespaceId, std::string> Kernel::create_container(const ContainerSpec &spec) {
  if (spec.id.empty()) return unexpected(std::string("container id is empty"));
  if (container_index_.contains(spec.id)) {
    return unexpected("duplicate container id '" + spec.id + "'");
  }
  NamespaceId ns;
  if (spec.host) {
    const bool host_taken = std::any_of(containers_.begin(), containers_.end(),
                                        [](const Container &c) { return c.host; });
    if (host_taken) return unexpected("host namespace already claimed; cannot add '" + spec.id + "'");
    ns = kHostNamespace;
  } else {
    ns = NamespaceId(next_namespace_++);
  }
  const auto caps = effective_caps_ ? effective_caps_(spec.id, spec.caps) : spec.caps;
  container_index_[spec.id] = containers_.size();
  containers_.push_back(Container{spec.id, ns, caps, spec.bpffs_mounted, spec.managed, spec.host});
  if (spec.managed) orchestrator_.track(spec.id);

  OrderedJson d;
  d["ns"] = ns.value();
  d["granted"] = spec.caps.to_string();
  d["caps"] = caps.to_string();
  d["bpffs"] = spec.bpffs_mounted;
  d["managed"] = spec.managed;
  log_.append(now_, "container_create", 0, spec.id, std::move(d));
  return ns;
}

Expected<void, std::string> Kernel::add_file(const ContainerId &container, const std::string &path,
                                             Bytes contents, bool sensitive) {
  const auto *c = this->container(container);
  if (c == nullptr) return unexpected("unknown container '" + container + "'");
  return vfs_.add(FileNode{path, c->ns, std::move(contents), sensitive});
}

Expected<void, std::string> Kernel::add_workload(Workload workload) {
  if (workloads_.contains(workload.id)) return unexpected("duplicate workload '" + workload.id + "'");
  auto id = workload.id;
  workloads_.emplace(std::move(id), std::move(workload));
  return {};
}

Expected<void, std::string> Kernel::add_object(bpf::BpfObject object) {
  if (objects_.contains(object.id)) return unexpected("duplicate object '" + object.id + "'");
  auto id = object.id;
  objects_.emplace(std::move(id), std::move(object));
  return {};
}

Expected<Pid, SpawnError> Kernel::spawn_process(const ContainerId &container, std::string_view comm,
                                                std::uint32_t uid, std::uint32_t gid,
                                                const std::string &workload, Tick start_delay) {
  if (this->container(container) == nullptr) return unexpected(SpawnError::UnknownContainer);
  if (!workloads_.contains(workload)) return unexpected(SpawnError::UnknownWorkload);

  const Pid pid(next_pid_++);
  Process p;
  p.pid = pid;
  p.tgid = pid.value();
  p.uid = uid;
  p.gid = gid;
  p.comm = Comm(comm);
  p.container = container;
  p.workload = workload;

  // Initial spawns become the orchestrator's restart template.
  if (!restart_pending_[container]) {
    auto &tpl = templates_[container];
    if (tpl.empty()) ++incarnations_[container];
    tpl.push_back(ProcessTemplate{std::string(comm), uid, gid, workload});
  }

  OrderedJson d;
  d["comm"] = std::string(p.comm.view());
  d["uid"] = uid;
  d["gid"] = gid;
  d["workload"] = workload;
  d["incarnation"] = incarnations_[container];
  log_.append(now_, "spawn", pid.value(), container, std::move(d));

  processes_.emplace(pid, std::move(p));
  schedule(now_ + start_delay, StepEvent{pid});
  return pid;
}

// ---------------------------------------------------------------------------
// User memory

bpf::UserPtr Kernel::alloc_buffer(Pid pid, std::uint64_t capacity) {
  auto *p = find_process(pid);
  if (p == nullptr) return {};
  const bpf::UserPtr ptr{kUserBase + (static_cast<std::uint64_t>(pid.value()) << 28) +
                         (static_cast<std::uint64_t>(p->allocations++) << 12)};
  p->memory[ptr.addr] = UserBuffer{ptr, capacity, {}, bpf::FillState::Empty};
  return ptr;
}

bpf::UserPtr Kernel::alloc_string(Pid pid, const std::string &s) {
  auto ptr = alloc_buffer(pid, s.size() + 1);
  if (auto *buf = find_buffer(pid, ptr)) {
    buf->contents = s;
    buf->fill_state = bpf::FillState::Filled;
  }
  return ptr;
}

const UserBuffer *Kernel::user_buffer(Pid pid, bpf::UserPtr ptr) const { return find_buffer(pid, ptr); }

UserBuffer *Kernel::find_buffer(Pid pid, bpf::UserPtr ptr) {
  auto *p = find_process(pid);
  if (p == nullptr) return nullptr;
  auto it = p->memory.find(ptr.addr);
  return it == p->memory.end() ? nullptr : &it->second;
}

const UserBuffer *Kernel::find_buffer(Pid pid, bpf::UserPtr ptr) const {
  const auto *p = process(pid);
  if (p == nullptr) return nullptr;
  auto it = p->memory.find(ptr.addr);
  return it == p->memory.end() ? nullptr : &it->second;
}

std::optional<std::string> Kernel::user_string(const Process &p, const bpf::SyscallArg &arg) const {
  const auto *ptr = std::get_if<bpf::UserPtr>(&arg);
  if (ptr == nullptr) return std::nullopt;
  auto s = read_user_str(p.pid, *ptr);
  if (!s) return std::nullopt;
  return *s;
}

Expected<Bytes, bpf::HelperError> Kernel::read_user(Pid pid, bpf::UserPtr ptr, std::uint64_t len) const {
  const auto *buf = find_buffer(pid, ptr);
  if (buf == nullptr) return unexpected(bpf::HelperError::BadAddress);
  if (buf->fill_state == bpf::FillState::Empty) return unexpected(bpf::HelperError::BufferEmpty);
  if (len > buf->capacity) return unexpected(bpf::HelperError::BadAddress);
  return buf->contents.substr(0, static_cast<std::size_t>(len));
}

Expected<Bytes, bpf::HelperError> Kernel::read_user_str(Pid pid, bpf::UserPtr ptr) const {
  const auto *buf = find_buffer(pid, ptr);
  if (buf == nullptr) return unexpected(bpf::HelperError::BadAddress);
  if (buf->fill_state == bpf::FillState::Empty) return unexpected(bpf::HelperError::BufferEmpty);
  return buf->contents.substr(0, buf->contents.find('\0'));
}

Expected<bpf::FillState, bpf::HelperError> Kernel::write_user(Pid pid, bpf::UserPtr ptr, const Bytes &data) {
  auto *buf = find_buffer(pid, ptr);
  if (buf == nullptr) return unexpected(bpf::HelperError::BadAddress);
  if (data.size() > buf->capacity) return unexpected(bpf::HelperError::TooBig);
  // Empty -> Overwritten is not a legal transition.
  if (buf->fill_state == bpf::FillState::Empty) return unexpected(bpf::HelperError::BufferEmpty);
  const auto before = buf->fill_state;
  if (data.size() >= buf->contents.size()) {
    buf->contents = data;
  } else {
    buf->contents.replace(0, data.size(), data);
  }
  buf->fill_state = bpf::FillState::Overwritten;
  return before;
}

void Kernel::send_signal(Pid pid, int signo, const std::string &source) {
  deliver_signal(pid, signo, "bpf:" + source);
}

// ---------------------------------------------------------------------------
// Syscalls

bpf::EventContext Kernel::make_context(const Process &p, const SyscallRequest &req,
                                       std::uint64_t seq) const {
  bpf::EventContext ctx;
  ctx.pid = p.pid;
  ctx.tgid = p.tgid;
  ctx.uid = p.uid;
  ctx.gid = p.gid;
  ctx.comm = p.comm;
  ctx.container = p.container;
  ctx.syscall = req.name;
  ctx.phase = bpf::Phase::Enter;
  ctx.args = req.args;
  ctx.syscall_seq = seq;
  if (req.name == "read" || req.name == "write") ctx.user_buffer = ptr_arg(req, 1);
  return ctx;
}

SyscallResult Kernel::do_syscall(Pid pid, const SyscallRequest &req) {
  auto *p = find_process(pid);
  if (p == nullptr || p->state != ProcessState::Running) return {-kESRCH, true, 0};

  const std::uint64_t seq = ++next_syscall_seq_;
  {
    OrderedJson d;
    d["sc"] = seq;
    d["name"] = req.name;
    d["args"] = render_args(req.args);
    if (req.name == "openat" || req.name == "execve") {
      if (auto path = user_string(*p, req.args.at(req.name == "openat" ? 1 : 0))) d["path"] = *path;
    }
    log_.append(now_, "syscall_enter", pid.value(), p->container, std::move(d));
  }

  auto abort_with = [&](bpf::Phase phase) {
    OrderedJson d;
    d["sc"] = seq;
    d["name"] = req.name;
    d["phase"] = std::string(to_string(phase));
    log_.append(now_, "syscall_abort", pid.value(), p->container, std::move(d));
    return SyscallResult{-kESRCH, true, seq};
  };

  auto ctx = make_context(*p, req, seq);
  {
    const auto progs = runtime_.attached_for(bpf::Phase::Enter, req.name);
    runtime_.dispatch(ctx, progs, *this);
  }
  if (p->state != ProcessState::Running) return abort_with(bpf::Phase::Enter);

  OrderedJson exit_detail;
  const std::int64_t natural = kernel_action(*p, req, exit_detail);

  ctx.phase = bpf::Phase::Exit;
  ctx.natural_retval = natural;
  ctx.posted_override.reset();
  {
    const auto progs = runtime_.attached_for(bpf::Phase::Exit, req.name);
    runtime_.dispatch(ctx, progs, *this);
  }
  if (p->state != ProcessState::Running) return abort_with(bpf::Phase::Exit);

  const std::int64_t retval = ctx.posted_override.value_or(natural);

  OrderedJson d;
  d["sc"] = seq;
  d["name"] = req.name;
  d["retval"] = retval;
  if (ctx.posted_override) d["natural"] = natural;
  if (req.name == "read" && retval >= 0) {
    if (const auto *buf = find_buffer(pid, *ptr_arg(req, 1))) {
      const auto visible = std::min<std::uint64_t>(static_cast<std::uint64_t>(retval), buf->contents.size());
      d["data"] = buf->contents.substr(0, static_cast<std::size_t>(visible));
      d["fill"] = std::string(to_string(buf->fill_state));
    }
    ++p->completed_reads;
  }
  for (auto &[k, v] : exit_detail.items()) d[k] = v;
  log_.append(now_, "syscall_exit", pid.value(), p->container, std::move(d));
  return {retval, false, seq};
}

std::int64_t Kernel::kernel_action(Process &p, const SyscallRequest &req, OrderedJson &exit_detail) {
  const auto &c = containers_[container_index_.at(p.container)];

  if (req.name == "openat") {
    auto path = req.args.size() > 1 ? user_string(p, req.args[1]) : std::nullopt;
    if (!path) return -kEFAULT;
    if (vfs_.find(c.ns, *path) == nullptr) return -kENOENT;
    const auto fd = p.next_fd++;
    p.fds[fd] = OpenFile{*path, 0};
    return fd;
  }
  if (req.name == "read") {
    auto fd = p.fds.find(int_arg(req, 0));
    if (fd == p.fds.end()) return -kEBADF;
    auto ptr = ptr_arg(req, 1);
    auto *buf = ptr ? find_buffer(p.pid, *ptr) : nullptr;
    if (buf == nullptr) return -kEFAULT;
    const auto *file = vfs_.find(c.ns, fd->second.path);
    if (file == nullptr) return -kEBADF;
    const auto count = static_cast<std::uint64_t>(std::max<std::int64_t>(int_arg(req, 2), 0));
    const auto offset = std::min<std::uint64_t>(fd->second.offset, file->contents.size());
    const auto n = std::min({count, buf->capacity, file->contents.size() - offset});
    buf->contents = file->contents.substr(offset, n);
    buf->fill_state = bpf::FillState::Filled;
    fd->second.offset = offset + n;
    exit_detail["file"] = fd->second.path;
    exit_detail["offset"] = offset;
    return static_cast<std::int64_t>(n);
  }
  if (req.name == "write") {
    auto fd = p.fds.find(int_arg(req, 0));
    if (fd == p.fds.end()) return -kEBADF;
    auto ptr = ptr_arg(req, 1);
    const auto *buf = ptr ? find_buffer(p.pid, *ptr) : nullptr;
    if (buf == nullptr) return -kEFAULT;
    auto *file = vfs_.find(c.ns, fd->second.path);
    if (file == nullptr) return -kEBADF;
    const auto count = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max<std::int64_t>(int_arg(req, 2), 0)),
                                                buf->contents.size());
    file->contents += buf->contents.substr(0, static_cast<std::size_t>(count));
    return static_cast<std::int64_t>(count);
  }
  if (req.name == "close") {
    return p.fds.erase(int_arg(req, 0)) == 1 ? 0 : -kEBADF;
  }
  if (req.name == "execve") {
    auto path = req.args.empty() ? std::nullopt : user_string(p, req.args[0]);
    if (!path) return -kEFAULT;
    return vfs_.find(c.ns, *path) != nullptr ? 0 : -kENOENT;
  }
  if (req.name == "getpid") return p.pid.value();
  if (req.name == "sendmsg") {
    auto iface = req.args.size() > 0 ? user_string(p, req.args[0]) : std::nullopt;
    auto peer = req.args.size() > 1 ? user_string(p, req.args[1]) : std::nullopt;
    if (!iface || !peer) return -kEFAULT;
    if (network_ == nullptr) return -kENETUNREACH;
    NetMessage msg{now_, p.pid, p.container, *iface, *peer,
                   static_cast<std::uint64_t>(std::max<std::int64_t>(int_arg(req, 2), 0))};
    return network_->deliver(msg);
  }
  if (req.name == "bpf") {
    if (int_arg(req, 0) != kBpfObjLoadAttach) return -kEINVAL;
    auto object = req.args.size() > 1 ? user_string(p, req.args[1]) : std::nullopt;
    if (!object) return -kEFAULT;
    return bpf_load_attach(p, *object);
  }
  return -kENOSYS;
}

std::int64_t Kernel::bpf_load_attach(Process &p, const std::string &object) {
  const auto &c = containers_[container_index_.at(p.container)];
  auto it = objects_.find(object);
  if (it == objects_.end()) return -kENOENT;
  const auto &obj = it->second;

  auto loaded = runtime_.load_object(bpf::OwnerInfo{c.id, c.caps}, obj, *gate_);
  {
    OrderedJson d;
    d["object"] = obj.id;
    d["ok"] = loaded.has_value();
    OrderedJson progs = OrderedJson::array();
    for (const auto &prog : obj.programs) progs.push_back(prog.id);
    d["programs"] = progs;
    if (!loaded) d["error"] = loaded.error().to_string();
    log_.append(now_, "bpf_load", p.pid.value(), c.id, std::move(d));
  }
  if (!loaded) {
    return loaded.error().kind == bpf::LoadErrorKind::MalformedProgram ? -kEINVAL : -kEPERM;
  }

  std::int64_t rc = 0;
  for (auto id : *loaded) {
    const auto &prog = runtime_.program(id)->prog;
    OrderedJson d;
    d["prog"] = prog.id;
    d["hook"] = prog.hook.canonical_name();
    bool ok = true;
    std::string error;
    if (prog.hook.kind() == bpf::HookKind::Xdp &&
        (!c.caps.contains(Capability::NetAdmin) || network_ == nullptr ||
         !network_->attach_xdp(c, prog.id))) {
      ok = false;
      error = "NetdevAttachDenied";
    }
    if (ok) {
      auto link = runtime_.attach(id, prog.hook);
      if (link) {
        d["link"] = link->value();
      } else {
        ok = false;
        error = std::string(bpf::to_string(link.error()));
      }
    }
    d["ok"] = ok;
    if (!ok) {
      d["error"] = error;
      rc = -kEPERM;
    }
    log_.append(now_, "bpf_attach", p.pid.value(), c.id, std::move(d));
  }
  return rc;
}

// ---------------------------------------------------------------------------
// Signals and process lifecycle

SignalResult Kernel::deliver_signal(Pid target, int signo, const std::string &source) {
  auto *p = find_process(target);
  SignalResult result = SignalResult::Delivered;
  if (signo != kSigKill && signo != kSigTerm) {
    result = SignalResult::Invalid;
  } else if (p == nullptr || p->state != ProcessState::Running) {
    result = SignalResult::Ignored;
  }

  OrderedJson d;
  d["signo"] = signo;
  d["source"] = source;
  d["result"] = std::string(to_string(result));
  log_.append(now_, "signal", target.value(), p != nullptr ? p->container : "", std::move(d));

  if (result != SignalResult::Delivered) return result;
  if (signo == kSigKill) {
    finish(*p, ProcessState::Killed, "SIGKILL");
  } else {
    p->term_pending = true;
  }
  return result;
}

void Kernel::finish(Process &p, ProcessState to, const std::string &reason) {
  if (p.state != ProcessState::Running) return;
  OrderedJson d;
  d["from"] = std::string(to_string(p.state));
  d["to"] = std::string(to_string(to));
  d["reason"] = reason;
  p.state = to;
  p.fds.clear();
  log_.append(now_, "state", p.pid.value(), p.container, std::move(d));
}

Process *Kernel::find_process(Pid pid) {
  auto it = processes_.find(pid);
  return it == processes_.end() ? nullptr : &it->second;
}

const Process *Kernel::process(Pid pid) const {
  auto it = processes_.find(pid);
  return it == processes_.end() ? nullptr : &it->second;
}

const Container *Kernel::container(const ContainerId &id) const {
  auto it = container_index_.find(id);
  return it == container_index_.end() ? nullptr : &containers_[it->second];
}

std::uint32_t Kernel::incarnations(const ContainerId &id) const {
  auto it = incarnations_.find(id);
  return it == incarnations_.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// Scheduling

void Kernel::schedule(Tick at, std::variant<StepEvent, RestartEvent> ev) {
  queue_.push(Scheduled{at, next_event_seq_++, std::move(ev)});
}

void Kernel::advance_to(Tick t) { now_ = std::max(now_, t); }

void Kernel::step(Pid pid) {
  auto *p = find_process(pid);
  if (p == nullptr || p->state != ProcessState::Running) return;
  if (p->term_pending) {
    finish(*p, ProcessState::Exited, "SIGTERM");
    return;
  }
  const auto &w = workloads_.at(p->workload);
  if (p->pc >= w.steps.size()) {
    finish(*p, ProcessState::Exited, "workload complete");
    return;
  }
  const auto &s = w.steps[p->pc++];
  Tick delay = std::max<Tick>(1, execute_step(*p, s));
  if (p->state != ProcessState::Running) return;
  if (p->pc >= w.steps.size() && w.repeat && w.loop_start < w.steps.size()) {
    p->pc = w.loop_start;
    delay += w.period;
  }
  schedule(now_ + delay, StepEvent{pid});
}

Tick Kernel::execute_step(Process &p, const WorkloadStep &s) {
  using Op = WorkloadStep::Op;
  const Pid pid = p.pid;
  switch (s.op) {
    case Op::Openat: {
      auto path = alloc_string(pid, s.path);
      auto r = do_syscall(pid, {"openat", {kAtFdCwd, path, std::int64_t{0}}});
      if (auto *q = find_process(pid)) q->last_fd = r.retval;
      break;
    }
    case Op::Read: {
      auto buf = alloc_buffer(pid, s.capacity);
      auto r = do_syscall(pid, {"read", {p.last_fd, buf, static_cast<std::int64_t>(s.capacity)}});
      p.last_read_buffer = buf;
      p.last_read_retval = r.retval;
      break;
    }
    case Op::Write: {
      auto buf = alloc_string(pid, s.data);
      do_syscall(pid, {"write", {p.last_fd, buf, static_cast<std::int64_t>(s.data.size())}});
      break;
    }
    case Op::Close:
      do_syscall(pid, {"close", {p.last_fd}});
      p.last_fd = -1;
      break;
    case Op::Execve: {
      auto path = alloc_string(pid, s.path);
      do_syscall(pid, {"execve", {path, std::int64_t{0}, std::int64_t{0}}});
      break;
    }
    case Op::Getpid: do_syscall(pid, {"getpid", {}}); break;
    case Op::Interpret: {
      // The interpreter runs exactly the bytes read() reported.
      if (!p.last_read_buffer || p.last_read_retval <= 0) break;
      const auto *buf = find_buffer(pid, *p.last_read_buffer);
      if (buf == nullptr) break;
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(p.last_read_retval), buf->contents.size());
      std::istringstream script(buf->contents.substr(0, n));
      std::string line;
      while (std::getline(script, line)) {
        if (line.empty() || line.front() == '#') continue;
        p.executed.push_back(line);
        OrderedJson d;
        d["command"] = line;
        log_.append(now_, "exec", pid.value(), p.container, std::move(d));
      }
      break;
    }
    case Op::Sleep: break;
    case Op::Sendmsg: {
      auto iface = alloc_string(pid, s.iface);
      auto peer = alloc_string(pid, s.peer);
      do_syscall(pid, {"sendmsg", {iface, peer, static_cast<std::int64_t>(s.count)}});
      break;
    }
    case Op::BpfLoad: {
      auto object = alloc_string(pid, s.object);
      do_syscall(pid, {"bpf", {kBpfObjLoadAttach, object}});
      break;
    }
    case Op::Exit: finish(p, ProcessState::Exited, "exit"); break;
  }
  return s.ticks;
}

bool Kernel::container_down(const ContainerId &id) const {
  bool any = false;
  for (const auto &[pid, p] : processes_) {
    if (p.container != id) continue;
    any = true;
    if (p.state == ProcessState::Running) return false;
  }
  return any;
}

std::vector<OrchestratorEvent> Kernel::orchestrator_tick(Tick now) {
  std::vector<OrchestratorEvent> events;
  for (const auto &c : containers_) {
    if (!c.managed || restart_pending_[c.id]) continue;
    if (orchestrator_.status(c.id) == ContainerStatus::CrashLoopBackOff) continue;
    if (!container_down(c.id)) continue;

    auto ev = orchestrator_.on_down(c.id, now);
    OrderedJson d;
    d["event"] = std::string(to_string(ev.kind));
    d["restarts"] = ev.restart_count;
    if (ev.kind == OrchestratorEvent::Kind::RestartScheduled) {
      d["backoff"] = ev.backoff;
      d["at"] = ev.restart_at;
      restart_pending_[c.id] = true;
      schedule(ev.restart_at, RestartEvent{c.id});
    }
    log_.append(now, "orchestrator", 0, c.id, std::move(d));
    events.push_back(std::move(ev));
  }
  return events;
}

void Kernel::restart(const ContainerId &id) {
  auto ev = orchestrator_.on_restarted(id, now_);
  ++incarnations_[id];
  OrderedJson d;
  d["event"] = std::string(to_string(ev.kind));
  d["restarts"] = ev.restart_count;
  d["incarnation"] = incarnations_[id];
  log_.append(now_, "orchestrator", 0, id, std::move(d));
  for (const auto &t : templates_[id]) {
    // restart_pending_ stays set so these spawns do not extend the template.
    (void)spawn_process(id, t.comm, t.uid, t.gid, t.workload, 0);
  }
  restart_pending_[id] = false;
}

RunStats Kernel::run(Tick tick_limit) {
  RunStats stats;
  while (!queue_.empty()) {
    const Tick t = queue_.top().tick;
    if (t > tick_limit) break;
    now_ = std::max(now_, t);
    while (!queue_.empty() && queue_.top().tick == t) {
      auto ev = queue_.top();
      queue_.pop();
      if (const auto *s = std::get_if<StepEvent>(&ev.event)) {
        step(s->pid);
      } else {
        restart(std::get<RestartEvent>(ev.event).container);
      }
    }
    orchestrator_tick(now_);
    stats.last_tick = now_;
  }
  stats.quiescent = queue_.empty();
  return stats;
}

}  // namespace ebpfsim::kernel
