/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   acceptance <scenarios-dir> <ebpfsim-cli>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ebpfsim/bpf/map.hpp"
#include "ebpfsim/core/util.hpp"
#include "ebpfsim/harness/replay.hpp"
#include "ebpfsim/harness/run.hpp"
#include "ebpfsim/harness/scenario.hpp"
#include "ebpfsim/kernel/kernel.hpp"
#include "ebpfsim/upf/topology.hpp"
#include "ebpfsim/upf/user_plane.hpp"
#include "oracles.hpp"

namespace {

using namespace ebpfsim;
using namespace ebpfsim::harness;
using attacks::AttackKind;
using attacks::OutcomeKind;
using Clock = std::chrono::steady_clock;

std::string g_scenarios;
std::string g_cli;

/// Collects failures for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string &what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string &s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }

  void report(const std::string &id, const std::string &title) const {
    std::cout << (ok() ? "[PASS] " : "[FAIL] ") << id << " " << title << " (" << total_ - failures_.size() << "/"
              << total_ << " checks)";
    for (const auto &n : notes_) std::cout << "; " << n;
    std::cout << "\n";
    for (const auto &f : failures_) std::cout << "       - " << f << "\n";
  }

 private:
  std::size_t total_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

Scenario load(const std::string &file) {
  auto s = load_scenario(g_scenarios + "/" + file);
  if (!s) {
    std::cerr << file << ": " << s.error().to_string() << "\n";
    std::exit(2);
  }
  return *s;
}

std::vector<OrderedJson> parse_log(const std::string &events) {
  std::vector<OrderedJson> out;
  std::istringstream in(events);
  for (std::string line; std::getline(in, line);) out.push_back(OrderedJson::parse(line));
  return out;
}

const FileState *file_of(const RunResult &r, const ContainerId &c, const std::string &path) {
  for (const auto &f : r.files) {
    if (f.container == c && f.path == path) return &f;
  }
  return nullptr;
}

const AttackRun *attack_of(const RunResult &r, const std::string &id) {
  for (const auto &a : r.attacks) {
    if (a.spec.id == id) return &a;
  }
  return nullptr;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// AC1: attack reproduction

void check_tracing(Check &c, const Scenario &s, const RunResult &r, const std::vector<OrderedJson> &log) {
  const auto *a = attack_of(r, "trace");
  if (a == nullptr) return c.expect(false, "tracing attack missing");
  const auto owner = a->spec.owner;
  std::map<std::uint64_t, std::string> pid_container;
  std::set<std::uint64_t> truth;
  bool attached = false;
  for (const auto &rec : log) {
    const auto kind = rec["kind"].get<std::string>();
    if (kind == "spawn") pid_container[rec["pid"].get<std::uint64_t>()] = rec["container"].get<std::string>();
    if (kind == "bpf_attach" && rec["detail"]["prog"] == "trace:trace_enter" && rec["detail"]["ok"] == true) {
      attached = true;
    }
    if (attached && kind == "syscall_enter" && rec["container"] != owner) truth.insert(rec["pid"].get<std::uint64_t>());
  }
  std::set<std::uint64_t> seen;
  for (const auto &e : a->exfil) {
    if (e.kind == attacks::kProcessInfo && pid_container[e.pid] != owner) seen.insert(e.pid);
  }
  c.expect(attached, "tracing program never attached");
  c.expect(!truth.empty(), "no cross-container syscalls in the window");
  c.expect(seen == truth, "tracing saw " + std::to_string(seen.size()) + " cross-container pids, scheduler log has " +
                              std::to_string(truth.size()));
  std::set<std::string> comms;
  for (const auto &e : a->exfil) comms.insert(e.data);
  c.expect(comms.contains("open5gs-amfd") && comms.contains("open5gs-smfd"), "AMF/SMF not enumerated");
  c.note("tracing " + std::to_string(seen.size()) + "/" + std::to_string(truth.size()) + " pids");
  (void)s;
}

void check_dos(Check &c, const Scenario &s, const RunResult &r) {
  const auto *a = attack_of(r, "kill-falco");
  if (a == nullptr) return c.expect(false, "dos attack missing");
  const ContainerId victim = "falco";
  const OrderedJson *entry = nullptr;
  for (const auto &o : r.report["orchestrator"]) {
    if (o["container"] == victim) entry = &o;
  }
  if (entry == nullptr) return c.expect(false, "victim container not in orchestrator report");
  const auto incarnations = (*entry)["incarnations"].get<std::uint64_t>();
  const auto restarts = (*entry)["restarts"].get<std::uint64_t>();
  c.expect((*entry)["status"] == "CrashLoopBackOff", "victim status " + (*entry)["status"].get<std::string>());
  c.expect(incarnations <= s.orchestrator.threshold + 1,
           "victim needed " + std::to_string(incarnations) + " incarnations");
  std::size_t kills = 0;
  for (const auto &e : a->exfil) kills += e.kind == attacks::kKillReport;
  c.expect(kills == restarts + 1, "kill reports " + std::to_string(kills) + " vs restarts+1 " +
                                      std::to_string(restarts + 1));
  c.note("dos CrashLoopBackOff after " + std::to_string(incarnations) + " incarnations");
}

void check_theft(Check &c, const Scenario &s, const RunResult &r) {
  // SSH key.
  const auto *ssh = attack_of(r, "steal-ssh-key");
  const auto *key = file_of(r, "ssh", std::string(attacks::kSshKeyPath));
  if (ssh == nullptr || key == nullptr) return c.expect(false, "ssh theft setup missing");
  bool exact = false;
  for (const auto &e : ssh->exfil) exact = exact || (e.kind == attacks::kFileContent && e.data == key->contents);
  c.expect(exact, "ssh key not exfiltrated byte-exact");

  // UDM K/OPc: derive the seeded values from an independent topology build.
  kernel::Kernel k;
  upf::UserPlane plane;
  auto topo = upf::build_topology(k, plane, *s.topology);
  if (!topo) return c.expect(false, "topology rebuild failed");
  const auto *udm = attack_of(r, "steal-udm-keys");
  const auto *cfg = file_of(r, "udm", std::string(upf::kUdmConfigPath));
  if (udm == nullptr || cfg == nullptr) return c.expect(false, "udm theft setup missing");
  c.expect(cfg->contents.find(topo->udm_k) != std::string::npos, "udm file lacks the seeded K");
  c.expect(cfg->contents.find(topo->udm_opc) != std::string::npos, "udm file lacks the seeded OPc");
  bool udm_exact = false;
  for (const auto &e : udm->exfil) udm_exact = udm_exact || (e.kind == attacks::kFileContent && e.data == cfg->contents);
  c.expect(udm_exact, "udm config not exfiltrated byte-exact");
}

void check_injection(Check &c, const Scenario &s, const RunResult &r, const std::vector<OrderedJson> &log) {
  const auto *a = attack_of(r, "inject-backup");
  if (a == nullptr) return c.expect(false, "injection attack missing");
  const auto &payload = a->spec.params.payload;
  std::vector<std::string> executed;
  std::vector<std::int64_t> read_retvals;
  for (const auto &rec : log) {
    if (rec["container"] != "backup") continue;
    if (rec["kind"] == "exec") executed.push_back(rec["detail"]["command"].get<std::string>());
    if (rec["kind"] == "syscall_exit" && rec["detail"]["name"] == "read") {
      read_retvals.push_back(rec["detail"]["retval"].get<std::int64_t>());
    }
  }
  c.expect(executed == std::vector<std::string>{payload}, "interpreter did not run exactly the payload");
  c.expect(!read_retvals.empty() && read_retvals.front() == static_cast<std::int64_t>(payload.size()),
           "script read retval is not the payload length");
  std::string declared;
  for (const auto &f : s.files) {
    if (f.container == "backup" && f.path == a->spec.params.script_path) declared = f.contents;
  }
  const auto *disk = file_of(r, "backup", a->spec.params.script_path);
  c.expect(disk != nullptr && !declared.empty() && disk->contents == declared, "on-disk script changed");
}

Check ac1() {
  Check c;
  auto s = load("attack-all-permissive.json");
  auto t0 = Clock::now();
  auto r = run_scenario(s, policy::Policy{});
  const double secs = seconds_since(t0);
  auto log = parse_log(r.events);
  for (const auto &a : r.attacks) {
    c.expect(a.outcome.kind == OutcomeKind::Succeeded, a.spec.id + " " + a.outcome.to_string());
  }
  check_tracing(c, s, r, log);
  check_dos(c, s, r);
  check_theft(c, s, r);
  check_injection(c, s, r, log);
  c.expect(secs < 5.0, "scenario took " + std::to_string(secs) + " s");
  std::ostringstream t;
  t.precision(3);
  t << "run " << secs << " s";
  c.note(t.str());
  return c;
}

// ---------------------------------------------------------------------------
// AC2: mitigation matrix

Check ac2() {
  Check c;
  auto s = load("attack-all-permissive.json");
  auto policies = policy::load_policy_file(g_scenarios + "/policies.json");
  if (!policies) {
    c.expect(false, policies.error().to_string());
    return c;
  }
  auto m = run_matrix(s, *policies);
  struct Want {
    std::string policy;
    OutcomeKind kind;
    bool upf_ok;
  };
  const std::vector<Want> want{{"Permissive", OutcomeKind::Succeeded, true},
                               {"CapabilityStrip", OutcomeKind::BlockedAtLoad, false},
                               {"FineGrained", OutcomeKind::BlockedAtLoad, true}};
  c.expect(m.rows == attacks::all_attack_kinds(), "matrix rows are not the four attack kinds");
  c.expect(m.cells.size() == 12, "matrix has " + std::to_string(m.cells.size()) + " cells");
  for (const auto &w : want) {
    for (auto kind : attacks::all_attack_kinds()) {
      const auto *cell = m.cell(kind, w.policy);
      c.expect(cell != nullptr && cell->outcome.kind == w.kind,
               std::string(attacks::to_string(kind)) + " x " + w.policy + " = " +
                   (cell ? cell->outcome.to_string() : "missing"));
    }
    c.expect(m.upf_ok.contains(w.policy) && m.upf_ok.at(w.policy) == w.upf_ok, "upf_ok wrong for " + w.policy);
  }
  std::cout << m.render_table();
  return c;
}

// ---------------------------------------------------------------------------
// AC3: data-plane oracle equivalence

bool same_verdict(const upf::XdpVerdict &got, const oracle::RefVerdict &want) {
  switch (want.kind) {
    case oracle::RefVerdict::Pass: return got.kind == upf::VerdictKind::Pass;
    case oracle::RefVerdict::Drop: return got.kind == upf::VerdictKind::Drop;
    case oracle::RefVerdict::Redirect:
      return got.kind == upf::VerdictKind::Redirect && got.peer == want.peer && got.payload == want.payload;
  }
  return false;
}

Check ac3() {
  Check c;
  constexpr std::size_t kSeeds = 10;
  constexpr std::size_t kSessions = 10000;
  constexpr std::size_t kPackets = 100000;
  const std::vector<upf::SliceSpec> slices{{"sst1-sd000001", "upf-a", "dn-a"}, {"sst1-sd000002", "upf-b", "dn-b"}};

  std::uint64_t mismatches = 0, cross_slice = 0, redirects = 0, packets = 0;
  auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    upf::TrafficConfig tc;
    tc.sessions_per_slice = static_cast<std::uint32_t>(kSessions / slices.size());
    upf::TrafficGenerator gen(tc, slices, seed);
    upf::UserPlane plane;
    plane.set_record_verdicts(false);
    std::map<ContainerId, oracle::NaiveUserPlane> ref;
    std::size_t installed = 0;
    for (const auto &sl : slices) {
      plane.add_upf(sl.upf);
      plane.attach(sl.upf);
      for (const auto &sess : gen.plan(sl.upf)) {
        if (!plane.install_session(sl.upf, sess)) ++mismatches;
        ref[sl.upf].add({sess.teid, sess.action == upf::SessionAction::Forward, sess.peer, sess.ue_addr,
                         sess.access_peer});
        ++installed;
      }
    }
    c.expect(installed == kSessions, "seed " + std::to_string(seed) + " installed " + std::to_string(installed));
    for (std::size_t i = 0; i < kPackets; ++i) {
      const auto &sl = slices[i % slices.size()];
      const auto dir = (i / slices.size()) % 4 == 3 ? upf::Direction::Downlink : upf::Direction::Uplink;
      auto pkt = gen.next_packet(sl.upf, dir);
      auto got = plane.xdp_ingress(sl.upf, pkt);
      auto want = dir == upf::Direction::Uplink ? ref[sl.upf].uplink(pkt.wire) : ref[sl.upf].downlink(pkt.wire);
      if (!same_verdict(got, want)) ++mismatches;
      if (got.kind == upf::VerdictKind::Redirect) {
        ++redirects;
        if (pkt.slice != sl.name) ++cross_slice;
      }
      ++packets;
    }
  }
  const double secs = seconds_since(t0);
  c.expect(mismatches == 0, std::to_string(mismatches) + " verdict mismatches vs linear scan");
  c.expect(cross_slice == 0, std::to_string(cross_slice) + " cross-slice redirects");
  c.expect(redirects > packets / 2, "too few redirects to be meaningful");

  // Attack orthogonality and slice audit on full simulator runs.
  auto s = load("attack-all-permissive.json");
  kernel::Kernel k;
  upf::UserPlane p;
  auto topo = upf::build_topology(k, p, *s.topology);
  std::map<std::string, std::string> slice_of;
  for (const auto &sl : topo->slices) slice_of[sl.upf] = sl.name;
  std::size_t identical = 0, audited = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    auto with = s;
    override_seed(with, seed);
    auto without = with;
    without.attacks.clear();
    auto a = run_scenario(with, policy::Policy{});
    auto b = run_scenario(without, policy::Policy{});
    identical += a.verdicts == b.verdicts && !a.verdicts.empty();
    std::istringstream in(a.verdicts);
    for (std::string line; std::getline(in, line);) {
      auto v = OrderedJson::parse(line);
      if (v["verdict"] != "Redirect") continue;
      ++audited;
      if (v["slice"] != slice_of[v["upf"].get<std::string>()]) ++cross_slice;
    }
  }
  c.expect(identical == kSeeds, std::to_string(kSeeds - identical) + " seeds with verdict changes under attack");
  c.expect(cross_slice == 0, std::to_string(cross_slice) + " cross-slice redirects in simulator runs");
  c.expect(audited > 0, "no simulator redirects to audit");
  std::ostringstream n;
  n.precision(3);
  n << kSeeds << " seeds x " << kSessions << " sessions x " << kPackets << " packets, " << mismatches
    << " mismatches, " << secs << " s; " << audited << " simulator redirects audited";
  c.note(n.str());
  return c;
}

// ---------------------------------------------------------------------------
// AC4: invariant suite

void audit_phase_safety(Check &c, const std::string &events, const std::string &label) {
  std::size_t writes = 0;
  for (const auto &rec : parse_log(events)) {
    if (rec["kind"] != "helper" || rec["detail"]["ok"] != true) continue;
    const auto helper = rec["detail"]["helper"].get<std::string>();
    if (helper != "probe_write_user" && helper != "override_return") continue;
    ++writes;
    c.expect(rec["detail"]["phase"] == "Exit", label + ": " + helper + " outside Exit");
    if (helper == "probe_write_user") {
      const auto fill = rec["detail"].value("fill_before", "");
      c.expect(fill == "Filled" || fill == "Overwritten", label + ": write into " + fill + " buffer");
    }
  }
  if (label == "Permissive") c.expect(writes > 0, "no write/override effects to audit");
}

void audit_policy(Check &c, const policy::Policy &p, const RunResult &r) {
  for (const auto &rec : parse_log(r.events)) {
    if (rec["kind"] != "helper" && rec["kind"] != "hook") continue;
    const auto owner = rec["detail"]["owner"].get<std::string>();
    const auto *rule = p.rule(owner);
    if (p.mode() != policy::PolicyMode::FineGrained || rule == nullptr) continue;
    if (rec["kind"] == "helper" && rule->allowed_helpers) {
      auto h = bpf::parse_helper(rec["detail"]["helper"].get<std::string>());
      c.expect(h && rule->allowed_helpers->contains(*h), p.name() + ": helper outside allow-list");
    }
    if (rec["kind"] == "hook" && rule->allowed_hooks) {
      c.expect(rule->allowed_hooks->contains(rec["detail"]["hook"].get<std::string>()),
               p.name() + ": hook outside allow-list");
    }
  }
  for (const auto &a : r.attacks) {
    if (a.outcome.kind != OutcomeKind::BlockedAtLoad) continue;
    c.expect(a.exfil.empty(), p.name() + ": blocked " + a.spec.id + " has channel records");
    c.expect(r.events.find("\"prog\":\"" + a.spec.id + ":") == std::string::npos,
             p.name() + ": blocked " + a.spec.id + " has effects in the log");
  }
}

void check_isolation(Check &c) {
  auto s = load("isolation-no-ebpf.json");
  auto r = run_scenario(s, policy::Policy{});
  auto log = parse_log(r.events);
  std::map<std::uint64_t, std::string> open_path;
  std::size_t reads = 0, opens = 0;
  for (const auto &rec : log) {
    const auto kind = rec["kind"].get<std::string>();
    c.expect(kind != "hook" && kind != "helper", "a program ran in the no-eBPF scenario");
    if (kind == "bpf_load") c.expect(rec["detail"]["ok"] != true, "a program loaded in the no-eBPF scenario");
    if (kind == "syscall_enter" && rec["detail"]["name"] == "openat") {
      open_path[rec["detail"]["sc"].get<std::uint64_t>()] = rec["detail"].value("path", "");
    }
    if (kind != "syscall_exit") continue;
    const auto container = rec["container"].get<std::string>();
    const auto name = rec["detail"]["name"].get<std::string>();
    const auto retval = rec["detail"]["retval"].get<std::int64_t>();
    if (name == "getpid") c.expect(retval == rec["pid"].get<std::int64_t>(), "getpid returned a foreign pid");
    if (name == "openat") {
      ++opens;
      const auto &path = open_path[rec["detail"]["sc"].get<std::uint64_t>()];
      c.expect((retval >= 0) == (file_of(r, container, path) != nullptr), container + " open of " + path);
    }
    if (name == "read" && retval > 0) {
      ++reads;
      const auto *own = file_of(r, container, rec["detail"]["file"].get<std::string>());
      const auto data = rec["detail"]["data"].get<std::string>();
      const auto offset = rec["detail"]["offset"].get<std::size_t>();
      c.expect(own != nullptr && own->contents.compare(offset, data.size(), data) == 0,
               container + " read bytes that are not its own");
    }
  }
  c.expect(reads > 0 && opens > 0, "isolation scenario did no file I/O");
}

void check_override_slot(Check &c) {
  kernel::Kernel k;
  k.create_container({"victim"});
  k.create_container({"upf-a", {Capability::NetAdmin, Capability::SysAdmin}});
  k.add_file("victim", "/f", "hello");
  k.add_workload(kernel::Workload{"w", {kernel::WorkloadStep{}}, true});
  auto pid = *k.spawn_process("victim", "app", 0, 0, "w");
  bpf::PermissiveGate gate;
  for (std::uint64_t v : {3u, 7u}) {
    bpf::EbpfProgram p{"o" + std::to_string(v), "upf-a", bpf::HookPoint::kretprobe("read"),
                       {bpf::Rule{{}, {bpf::HelperCall{bpf::Helper::OverrideReturn, {bpf::Operand::u64(v)}, {}}}}},
                       {}, {}};
    bpf::finalize(p);
    auto id = k.runtime().load_program({"upf-a", k.container("upf-a")->caps}, p, gate);
    c.expect(id && k.runtime().attach(*id, p.hook), "override program did not load");
  }
  auto fd = k.do_syscall(pid, {"openat", {kernel::kAtFdCwd, k.alloc_string(pid, "/f")}}).retval;
  auto r = k.do_syscall(pid, {"read", {fd, k.alloc_buffer(pid, 16), std::int64_t{16}}});
  c.expect(r.retval == 3, "first override did not win");
  std::size_t conflicts = 0;
  for (const auto &rec : k.log().records()) {
    conflicts += rec.kind == "helper" && rec.detail.value("error", "") == "OverrideConflict";
  }
  c.expect(conflicts == 1, "second override did not error with OverrideConflict");
}

void check_map_capacity(Check &c) {
  bpf::BpfMap m("s/m", bpf::MapSpec{"m", bpf::KeyType::U32, bpf::ValueType::U64, 4});
  for (std::uint64_t k = 0; k < 4; ++k) c.expect(static_cast<bool>(m.update(k, k)), "insert below capacity failed");
  auto full = m.update(std::uint64_t{99}, std::uint64_t{1});
  c.expect(!full && full.error() == bpf::MapError::Full, "full map accepted a new key");
  c.expect(m.size() == 4 && m.lookup(std::uint64_t{0}), "full map evicted an entry");
  c.expect(static_cast<bool>(m.update(std::uint64_t{2}, std::uint64_t{5})), "update of existing key failed");
}

Check ac4() {
  Check c;
  auto s = load("attack-all-permissive.json");

  // Determinism.
  for (std::uint64_t seed : {7u, 11u, 12345u}) {
    auto sc = s;
    override_seed(sc, seed);
    auto a = run_scenario(sc, policy::Policy{});
    auto b = run_scenario(sc, policy::Policy{});
    c.expect(a.events == b.events && a.verdicts == b.verdicts && dump_compact(a.report) == dump_compact(b.report),
             "seed " + std::to_string(seed) + " not byte-identical");
  }

  check_isolation(c);

  // Phase safety and policy soundness under every shipped policy.
  auto policies = policy::load_policy_file(g_scenarios + "/policies.json");
  c.expect(static_cast<bool>(policies), "policies.json did not load");
  if (policies) {
    for (const auto &p : *policies) {
      auto r = run_scenario(s, p);
      audit_phase_safety(c, r.events, p.name());
      audit_policy(c, p, r);
      auto replay = verify_log(r.events);
      c.expect(replay && replay->ok(), p.name() + ": replay verifier rejected a clean log");
    }
  }

  check_override_slot(c);
  check_map_capacity(c);
  return c;
}

// ---------------------------------------------------------------------------
// AC5: replay detects injected corruption

int run_cli(const std::vector<std::string> &args) {
  std::string cmd = "'" + g_cli + "'";
  for (const auto &a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Check ac5() {
  Check c;
  auto s = load("attack-all-permissive.json");
  auto r = run_scenario(s, policy::Policy{});
  std::vector<std::string> lines;
  {
    std::istringstream in(r.events);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
  }
  auto find = [&](std::initializer_list<std::string_view> needles) -> std::size_t {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      bool all = true;
      for (auto n : needles) all = all && lines[i].find(n) != std::string::npos;
      if (all) return i;
    }
    return lines.size();
  };
  auto join = [](const std::vector<std::string> &ls) {
    std::string out;
    for (const auto &l : ls) out += l + "\n";
    return out;
  };

  struct Case {
    std::string name;
    harness::ViolationClass expect;
    std::vector<std::string> lines;
  };
  std::vector<Case> cases;

  // Phase: a buffer write reported at syscall entry.
  {
    auto ls = lines;
    auto i = find({"\"helper\":\"probe_write_user\"", "\"ok\":true"});
    if (i < ls.size()) {
      auto pos = ls[i].find("\"phase\":\"Exit\"");
      ls[i].replace(pos, 14, "\"phase\":\"Enter\"");
    }
    cases.push_back({"phase", harness::ViolationClass::PhaseSafety, ls});
  }
  // Policy: the header claims the fine-grained policy the run never had.
  {
    auto ls = lines;
    auto header = OrderedJson::parse(ls[0]);
    header["detail"]["policy"] = policy::shipped_policies(scenario_upfs(s))[2].to_json();
    ls[0] = dump_compact(header);
    cases.push_back({"policy", harness::ViolationClass::PolicySoundness, ls});
  }
  // Ordering: a syscall exit moved ahead of its entry.
  {
    auto ls = lines;
    auto i = find({"\"kind\":\"syscall_enter\"", "\"name\":\"read\""});
    auto j = i + 1;
    while (j < ls.size() && ls[j].find("\"kind\":\"syscall_exit\"") == std::string::npos) ++j;
    if (j < ls.size()) std::swap(ls[i], ls[j]);
    cases.push_back({"ordering", harness::ViolationClass::Ordering, ls});
  }

  const auto dir = std::filesystem::temp_directory_path() / "ebpfsim-acceptance";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string &name, const std::string &text) {
    auto path = (dir / name).string();
    std::ofstream(path, std::ios::binary) << text;
    return path;
  };

  c.expect(run_cli({"--replay", write("clean.log", r.events)}) == 0, "clean log rejected by the CLI");
  for (const auto &k : cases) {
    auto text = join(k.lines);
    auto report = verify_log(text);
    c.expect(report && report->has(k.expect), k.name + " corruption not classified as " +
                                                  std::string(harness::to_string(k.expect)));
    const int code = run_cli({"--replay", write(k.name + ".log", text)});
    c.expect(code != 0, k.name + " corruption accepted by the CLI");
    c.note(k.name + " exit " + std::to_string(code));
  }
  std::filesystem::remove_all(dir);
  return c;
}

}  // namespace

int main(int argc, char **argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <scenarios-dir> <ebpfsim-cli>\n";
    return 2;
  }
  g_scenarios = argv[1];
  g_cli = argv[2];

  const std::vector<std::tuple<std::string, std::string, std::function<Check()>>> criteria{
      {"AC1", "attack reproduction under the eUPF threat model", ac1},
      {"AC2", "mitigation matrix", ac2},
      {"AC3", "data-plane oracle equivalence, slice isolation, attack orthogonality", ac3},
      {"AC4", "invariant suite", ac4},
      {"AC5", "replay detects injected corruption", ac5},
  };
  bool all = true;
  for (const auto &[id, title, fn] : criteria) {
    auto result = fn();
    result.report(id, title);
    all = all && result.ok();
  }
  return all ? 0 : 1;
}
