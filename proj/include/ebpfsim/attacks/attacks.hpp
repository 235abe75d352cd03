/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ebpfsim/bpf/program.hpp"
#include "ebpfsim/bpf/runtime.hpp"
#include "ebpfsim/core/event_log.hpp"
#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/kernel/kernel.hpp"

namespace ebpfsim::attacks {

enum class AttackKind { Tracing, Dos, InfoTheft, BashInjection };
std::string_view to_string(AttackKind k);
std::optional<AttackKind> parse_attack_kind(std::string_view text);
const std::vector<AttackKind> &all_attack_kinds();

enum class ExitHook { Kretprobe, Tracepoint };

struct AttackParams {
  std::string target_comm;      // Dos
  std::string filename_suffix;  // InfoTheft
  std::string script_path;      // BashInjection
  Bytes payload;                // BashInjection
  ExitHook exit_hook = ExitHook::Kretprobe;
};

struct AttackSpec {
  std::string id;  // also the object id and map scope
  AttackKind kind = AttackKind::Tracing;
  ContainerId owner;
  AttackParams params;
  Tick start = 1;
};

// Channel record kinds.
inline constexpr std::string_view kProcessInfo = "ProcessInfo";
inline constexpr std::string_view kFileContent = "FileContent";
inline constexpr std::string_view kKillReport = "KillReport";
inline constexpr std::string_view kInjectionReport = "InjectionReport";

/// sys_enter probe that reports pid/tgid, uid/gid and comm of every caller.
bpf::EbpfProgram build_tracing(const std::string &id, const ContainerId &owner);
/// Read-entry probe that SIGKILLs every task named target_comm.
Expected<bpf::EbpfProgram, std::string> build_dos(const std::string &id, const ContainerId &owner,
                                                  const std::string &target_comm);
/// openat-entry probe marking pids that open *suffix, plus a read-exit probe
/// copying out what they read until they close.
Expected<bpf::BpfObject, std::string> build_info_theft(const std::string &id, const ContainerId &owner,
                                                       const std::string &filename_suffix,
                                                       ExitHook exit_hook = ExitHook::Kretprobe);
/// Rewrites the first read of a task that execve()d script_path with payload
/// and shortens the return value to match.
Expected<bpf::BpfObject, std::string> build_bash_injection(const std::string &id, const ContainerId &owner,
                                                           const std::string &script_path, const Bytes &payload,
                                                           ExitHook exit_hook = ExitHook::Kretprobe);

/// Builds the loadable object for any attack declaration.
Expected<bpf::BpfObject, std::string> build_object(const AttackSpec &spec);

/// A workload that loads and attaches the attack's object, then idles.
kernel::Workload loader_workload(const AttackSpec &spec);

struct ExfilRecord {
  Tick tick = 0;
  std::string kind;
  std::uint64_t pid = 0;
  Bytes data;

  std::string to_line() const;
};

/// The attacker channel of every program in the attack's object, merged in
/// tick order (stable across programs).
std::vector<ExfilRecord> exfil(const bpf::EbpfRuntime &rt, const std::string &attack_id);

enum class OutcomeKind { Succeeded, BlockedAtLoad, Degraded, NotRun };
std::string_view to_string(OutcomeKind k);

struct Outcome {
  OutcomeKind kind = OutcomeKind::NotRun;
  std::string reason;
  std::string to_string() const;  // "BlockedAtLoad(HelperDenied: probe_write_user)"
};

/// Classifies an attack run from the event log and its channel: it was
/// refused at load, achieved its effect, loaded but achieved nothing, or
/// never tried to load.
Outcome assess(const AttackSpec &spec, const EventLog &log, const bpf::EbpfRuntime &rt);

// Victim workloads.
inline constexpr std::string_view kFalcoConfig = "/etc/falco/falco.yaml";
inline constexpr std::string_view kSshKeyPath = "/root/.ssh/id_rsa";
inline constexpr std::string_view kBackupScript = "/opt/backup.sh";

/// Security-agent heartbeat: re-reads its rules file forever.
kernel::Workload heartbeat_workload(const std::string &id, const std::string &config_path = std::string(kFalcoConfig));
/// Login that reads a private key once.
kernel::Workload ssh_login_workload(const std::string &id, const std::string &key_path = std::string(kSshKeyPath));
/// Interpreter: execve the script, read it in one call, run each line.
kernel::Workload bash_workload(const std::string &id, const std::string &script_path = std::string(kBackupScript));

}  // namespace ebpfsim::attacks
