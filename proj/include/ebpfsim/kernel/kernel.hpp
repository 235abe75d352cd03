/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "ebpfsim/bpf/context.hpp"
#include "ebpfsim/bpf/runtime.hpp"
#include "ebpfsim/core/event_log.hpp"
#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/kernel/container.hpp"
#include "ebpfsim/kernel/orchestrator.hpp"
#include "ebpfsim/kernel/vfs.hpp"
#include "ebpfsim/kernel/workload.hpp"

namespace ebpfsim::kernel {

// errno values returned as negative syscall results.
inline constexpr std::int64_t kEPERM = 1;
inline constexpr std::int64_t kENOENT = 2;
inline constexpr std::int64_t kESRCH = 3;
inline constexpr std::int64_t kEBADF = 9;
inline constexpr std::int64_t kEFAULT = 14;
inline constexpr std::int64_t kEINVAL = 22;
inline constexpr std::int64_t kENOSYS = 38;
inline constexpr std::int64_t kENETUNREACH = 101;

inline constexpr std::int64_t kAtFdCwd = -100;
inline constexpr int kSigKill = 9;
inline constexpr int kSigTerm = 15;

enum class ProcessState { Running, Killed, Exited };
std::string_view to_string(ProcessState s);

struct UserBuffer {
  bpf::UserPtr address;
  std::uint64_t capacity = 0;
  Bytes contents;
  bpf::FillState fill_state = bpf::FillState::Empty;
};

struct OpenFile {
  std::string path;
  std::uint64_t offset = 0;
};

struct Process {
  Pid pid;
  std::uint32_t tgid = 0;
  std::uint32_t uid = 0;
  std::uint32_t gid = 0;
  Comm comm;
  ContainerId container;
  ProcessState state = ProcessState::Running;
  std::string workload;

  // Workload interpreter state.
  std::size_t pc = 0;
  std::int64_t last_fd = -1;
  std::optional<bpf::UserPtr> last_read_buffer;
  std::int64_t last_read_retval = 0;
  bool term_pending = false;

  std::map<std::int64_t, OpenFile> fds;
  std::int64_t next_fd = 3;
  std::map<std::uint64_t, UserBuffer> memory;
  std::uint32_t allocations = 0;

  std::vector<std::string> executed;  // commands run by the interpreter step
  std::uint32_t completed_reads = 0;
};

struct SyscallRequest {
  std::string name;
  std::vector<bpf::SyscallArg> args;
};

struct SyscallResult {
  std::int64_t retval = 0;
  bool aborted = false;  // the caller was killed inside a hook
  std::uint64_t seq = 0;
};

enum class SignalResult { Delivered, Ignored, Invalid };
std::string_view to_string(SignalResult r);

enum class SpawnError { UnknownContainer, UnknownWorkload };
std::string_view to_string(SpawnError e);

struct NetMessage {
  Tick tick = 0;
  Pid sender;
  ContainerId container;
  std::string iface;
  std::string peer;
  std::uint64_t count = 0;
};

/// Whatever sits behind sendmsg() and XDP attachment (the user plane).
class NetworkFabric {
 public:
  virtual ~NetworkFabric() = default;
  virtual std::int64_t deliver(const NetMessage &msg) = 0;
  virtual bool attach_xdp(const Container &owner, const std::string &program) = 0;
};

struct KernelConfig {
  OrchestratorConfig orchestrator;
  /// Maps a container's granted capabilities to the ones it runs with.
  std::function<CapabilitySet(const ContainerId &, const CapabilitySet &)> effective_caps;
};

struct RunStats {
  Tick last_tick = 0;
  bool quiescent = false;
};

/// Single-threaded discrete-event model of one shared host kernel.
///
/// Every syscall runs atomically through: entry hooks, the kernel action,
/// exit hooks, return-value override, return. Processes advance by scripted
/// workload steps scheduled on one global (tick, sequence) ordered queue, so a
/// run is a pure function of its inputs.
class Kernel final : public bpf::KernelServices {
 public:
  explicit Kernel(KernelConfig config = {}, const bpf::LoadGate *gate = nullptr);

  Kernel(const Kernel &) = delete;
  Kernel &operator=(const Kernel &) = delete;

  EventLog &log() { return log_; }
  const EventLog &log() const { return log_; }
  bpf::EbpfRuntime &runtime() { return runtime_; }
  const bpf::EbpfRuntime &runtime() const { return runtime_; }
  void set_network(NetworkFabric *net) { network_ = net; }

  Expected<NamespaceId, std::string> create_container(const ContainerSpec &spec);
  Expected<void, std::string> add_file(const ContainerId &container, const std::string &path,
                                       Bytes contents, bool sensitive = false);
  Expected<void, std::string> add_workload(Workload workload);
  Expected<void, std::string> add_object(bpf::BpfObject object);

  /// Creates a Running process whose first workload step runs start_delay
  /// ticks from now.
  Expected<Pid, SpawnError> spawn_process(const ContainerId &container, std::string_view comm,
                                          std::uint32_t uid, std::uint32_t gid,
                                          const std::string &workload, Tick start_delay = 0);

  SyscallResult do_syscall(Pid pid, const SyscallRequest &req);
  SignalResult deliver_signal(Pid target, int signo, const std::string &source = "user");
  std::vector<OrchestratorEvent> orchestrator_tick(Tick now);

  /// Processes events until the queue drains or the next event lies beyond
  /// tick_limit. The orchestrator runs after every processed tick.
  RunStats run(Tick tick_limit);

  /// Allocates an Empty buffer in the process's address space.
  bpf::UserPtr alloc_buffer(Pid pid, std::uint64_t capacity);
  /// Allocates a Filled buffer holding s (a user-space string).
  bpf::UserPtr alloc_string(Pid pid, const std::string &s);
  const UserBuffer *user_buffer(Pid pid, bpf::UserPtr ptr) const;

  Tick now() const override { return now_; }
  /// Moves the clock forward for direct-drive use (tests, tools).
  void advance_to(Tick t);

  const Process *process(Pid pid) const;
  const std::map<Pid, Process> &processes() const { return processes_; }
  const Container *container(const ContainerId &id) const;
  const std::vector<Container> &containers() const { return containers_; }
  const VirtualFs &vfs() const { return vfs_; }
  const Orchestrator &orchestrator() const { return orchestrator_; }
  /// Number of processes ever spawned in the container.
  std::uint32_t incarnations(const ContainerId &id) const;

  // bpf::KernelServices
  Expected<Bytes, bpf::HelperError> read_user(Pid pid, bpf::UserPtr ptr, std::uint64_t len) const override;
  Expected<Bytes, bpf::HelperError> read_user_str(Pid pid, bpf::UserPtr ptr) const override;
  Expected<bpf::FillState, bpf::HelperError> write_user(Pid pid, bpf::UserPtr ptr, const Bytes &data) override;
  void send_signal(Pid pid, int signo, const std::string &source) override;

 private:
  struct StepEvent {
    Pid pid;
  };
  struct RestartEvent {
    ContainerId container;
  };
  struct Scheduled {
    Tick tick;
    std::uint64_t seq;
    std::variant<StepEvent, RestartEvent> event;
    bool operator>(const Scheduled &o) const {
      return tick != o.tick ? tick > o.tick : seq > o.seq;
    }
  };
  struct ProcessTemplate {
    std::string comm;
    std::uint32_t uid;
    std::uint32_t gid;
    std::string workload;
  };

  void schedule(Tick at, std::variant<StepEvent, RestartEvent> ev);
  void step(Pid pid);
  Tick execute_step(Process &p, const WorkloadStep &s);
  void restart(const ContainerId &id);
  void finish(Process &p, ProcessState to, const std::string &reason);
  std::int64_t kernel_action(Process &p, const SyscallRequest &req, OrderedJson &exit_detail);
  std::int64_t bpf_load_attach(Process &p, const std::string &object);
  bpf::EventContext make_context(const Process &p, const SyscallRequest &req, std::uint64_t seq) const;
  Process *find_process(Pid pid);
  UserBuffer *find_buffer(Pid pid, bpf::UserPtr ptr);
  const UserBuffer *find_buffer(Pid pid, bpf::UserPtr ptr) const;
  std::optional<std::string> user_string(const Process &p, const bpf::SyscallArg &arg) const;
  bool container_down(const ContainerId &id) const;

  EventLog log_;
  bpf::EbpfRuntime runtime_{&log_};
  bpf::PermissiveGate default_gate_;
  const bpf::LoadGate *gate_;
  NetworkFabric *network_ = nullptr;

  std::vector<Container> containers_;
  std::map<ContainerId, std::size_t> container_index_;
  std::map<ContainerId, std::vector<ProcessTemplate>> templates_;
  std::map<ContainerId, bool> restart_pending_;
  std::map<ContainerId, std::uint32_t> incarnations_;
  std::uint32_t next_namespace_ = 1;

  VirtualFs vfs_;
  std::map<std::string, Workload> workloads_;
  std::map<std::string, bpf::BpfObject> objects_;
  std::map<Pid, Process> processes_;
  std::uint32_t next_pid_ = 100;

  std::function<CapabilitySet(const ContainerId &, const CapabilitySet &)> effective_caps_;
  Orchestrator orchestrator_;
  std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> queue_;
  std::uint64_t next_event_seq_ = 0;
  std::uint64_t next_syscall_seq_ = 0;
  Tick now_ = 0;
};

}  // namespace ebpfsim::kernel
