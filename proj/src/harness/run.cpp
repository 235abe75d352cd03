/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/harness/run.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ebpfsim/core/util.hpp"

namespace ebpfsim::harness {
namespace {

void require(const Expected<void, std::string> &r, const std::string &what) {
  if (!r) throw std::runtime_error(what + ": " + r.error());
}

kernel::Workload object_loader(const std::string &object) {
  kernel::WorkloadStep load;
  load.op = kernel::WorkloadStep::Op::BpfLoad;
  load.object = object;
  kernel::WorkloadStep idle;
  idle.op = kernel::WorkloadStep::Op::Sleep;
  idle.ticks = 10;
  return kernel::Workload{"loader-" + object, {load, idle}, true, 1, 1};
}

OrderedJson build_report(const Scenario &s, const RunResult &r, const kernel::Kernel &k) {
  OrderedJson j;
  j["schema"] = std::string(kReportSchema);
  j["scenario"] = s.name;
  j["scenario_hash"] = hex64(s.hash());
  j["seed"] = s.seed;
  j["policy"] = r.policy;
  j["tick_limit"] = s.tick_limit;
  j["last_tick"] = r.stats.last_tick;
  j["quiescent"] = r.stats.quiescent;

  OrderedJson attacks = OrderedJson::array();
  for (const auto &a : r.attacks) {
    OrderedJson e;
    e["id"] = a.spec.id;
    e["kind"] = std::string(attacks::to_string(a.spec.kind));
    e["owner"] = a.spec.owner;
    e["outcome"] = std::string(attacks::to_string(a.outcome.kind));
    if (!a.outcome.reason.empty()) e["reason"] = a.outcome.reason;
    std::size_t bytes = 0;
    OrderedJson kinds = OrderedJson::object();
    for (const auto &rec : a.exfil) {
      bytes += rec.data.size();
      kinds[rec.kind] = kinds.value(rec.kind, 0) + 1;
    }
    e["exfil"] = {{"records", a.exfil.size()},
                  {"bytes", bytes},
                  {"kinds", kinds},
                  {"file", "exfil/" + a.spec.id + ".log"}};
    attacks.push_back(std::move(e));
  }
  j["attacks"] = attacks;

  OrderedJson pipelines = OrderedJson::array();
  for (const auto &u : r.upfs) {
    pipelines.push_back({{"upf", u.upf},
                         {"attached", u.attached},
                         {"sessions", u.sessions},
                         {"pass", u.counters.pass},
                         {"drop", u.counters.drop},
                         {"redirect", u.counters.redirect}});
  }
  j["upf"] = {{"upf_ok", r.upf_ok}, {"pipelines", pipelines}};

  OrderedJson orch = OrderedJson::array();
  for (const auto &c : k.containers()) {
    if (!c.managed) continue;
    orch.push_back({{"container", c.id},
                    {"status", std::string(kernel::to_string(k.orchestrator().status(c.id)))},
                    {"restarts", k.orchestrator().restart_count(c.id)},
                    {"incarnations", k.incarnations(c.id)}});
  }
  j["orchestrator"] = orch;

  OrderedJson files = OrderedJson::array();
  for (const auto &f : r.files) {
    files.push_back({{"container", f.container},
                     {"path", f.path},
                     {"sensitive", f.sensitive},
                     {"bytes", f.contents.size()},
                     {"digest", hex64(fnv1a64(f.contents))}});
  }
  j["files"] = files;

  j["log"] = {{"path", "events.log"}, {"records", k.log().size()}, {"digest", hex64(fnv1a64(r.events))}};
  std::size_t verdict_lines = 0;
  for (char c : r.verdicts) verdict_lines += c == '\n';
  j["verdicts"] = {{"path", "verdicts.log"}, {"records", verdict_lines}, {"digest", hex64(fnv1a64(r.verdicts))}};
  return j;
}

}  // namespace

policy::RunOutcome RunResult::outcome() const {
  policy::RunOutcome o;
  o.upf_ok = upf_ok;
  for (const auto &a : attacks) o.attacks.push_back({a.spec.id, a.spec.kind, a.outcome});
  return o;
}

RunResult run_scenario(const Scenario &s, const policy::Policy &p) {
  kernel::KernelConfig config;
  config.orchestrator = s.orchestrator;
  config.effective_caps = [&p](const ContainerId &id, const CapabilitySet &caps) { return p.effective_caps(id, caps); };
  kernel::Kernel k(config, &p);
  upf::UserPlane plane(&k.log());

  {
    OrderedJson h;
    h["schema"] = std::string(kLogSchema);
    h["scenario"] = s.name;
    h["scenario_hash"] = hex64(s.hash());
    h["seed"] = s.seed;
    h["policy"] = p.to_json();
    k.log().append(0, "header", 0, "", std::move(h));
  }

  if (s.topology) {
    auto topo = upf::build_topology(k, plane, *s.topology);
    if (!topo) throw std::runtime_error("topology: " + topo.error());
  }
  for (const auto &c : s.containers) {
    auto ns = k.create_container(c);
    if (!ns) throw std::runtime_error("container: " + ns.error());
  }
  for (const auto &f : s.files) {
    auto contents = f.generator.empty() ? f.contents : generate_ssh_key(s.seed, f.container + ":" + f.path);
    require(k.add_file(f.container, f.path, std::move(contents), f.sensitive), "file " + f.path);
  }
  for (const auto &w : s.workloads) require(k.add_workload(w), "workload " + w.id);

  auto spawn = [&k](const ContainerId &c, const std::string &comm, const std::string &w, Tick start) {
    if (!k.spawn_process(c, comm, 0, 0, w, start)) throw std::runtime_error("cannot spawn " + w);
  };
  for (const auto &o : s.objects) {
    require(k.add_object(o.object), "object " + o.object.id);
    auto loader = object_loader(o.object.id);
    const auto wid = loader.id;
    require(k.add_workload(std::move(loader)), "workload " + wid);
    spawn(o.owner, o.loader_comm, wid, o.start);
  }
  for (const auto &a : s.attacks) {
    auto obj = attacks::build_object(a.spec);
    if (!obj) throw std::runtime_error("attack " + a.spec.id + ": " + obj.error());
    require(k.add_object(std::move(*obj)), "attack " + a.spec.id);
    auto loader = attacks::loader_workload(a.spec);
    const auto wid = loader.id;
    require(k.add_workload(std::move(loader)), "workload " + wid);
    spawn(a.spec.owner, a.loader_comm, wid, a.spec.start);
  }
  for (const auto &proc : s.processes) spawn(proc.container, proc.comm, proc.workload, proc.start);

  RunResult r;
  r.scenario = s.name;
  r.seed = s.seed;
  r.policy = p.name();
  r.stats = k.run(s.tick_limit);

  for (const auto &a : s.attacks) {
    r.attacks.push_back({a.spec, attacks::assess(a.spec, k.log(), k.runtime()), attacks::exfil(k.runtime(), a.spec.id)});
  }
  r.upf_ok = !plane.upfs().empty();
  for (const auto &id : plane.upfs()) {
    UpfHealth h{id, plane.attached(id), plane.pipeline(id)->size(), plane.counters(id)};
    r.upf_ok = r.upf_ok && h.attached && h.counters.redirect > 0;
    r.upfs.push_back(std::move(h));
  }
  for (const auto &c : k.containers()) {
    for (const auto &[key, node] : k.vfs().nodes()) {
      if (key.first == c.ns) r.files.push_back({c.id, node.path, node.contents, node.sensitive});
    }
  }
  r.events = k.log().serialize();
  r.verdicts = plane.verdict_log();
  r.report = build_report(s, r, k);
  return r;
}

Expected<policy::Policy, ConfigError> resolve_policy(const Scenario &s, const std::vector<policy::Policy> &available) {
  const auto defaults = policy::shipped_policies(scenario_upfs(s));
  const auto &pool = available.empty() ? defaults : available;
  if (const auto *inline_policy = std::get_if<policy::Policy>(&s.policy)) return *inline_policy;
  if (const auto *name = std::get_if<std::string>(&s.policy)) {
    for (const auto &p : pool) {
      if (p.name() == *name) return p;
    }
    return unexpected(ConfigError{ConfigError::Kind::Validation, "$.policy: unknown policy '" + *name + "'"});
  }
  return policy::Policy("Permissive", policy::PolicyMode::Permissive);
}

Expected<std::string, ConfigError> write_outputs(const RunResult &r, const std::string &out_root) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(out_root) / r.scenario / std::to_string(r.seed);
  std::error_code ec;
  fs::create_directories(dir / "exfil", ec);
  if (ec) return unexpected(ConfigError{ConfigError::Kind::Io, "cannot create '" + dir.string() + "': " + ec.message()});

  auto write = [](const fs::path &path, const std::string &data) -> bool {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << data;
    return static_cast<bool>(out);
  };
  bool ok = write(dir / "events.log", r.events) && write(dir / "verdicts.log", r.verdicts) &&
            write(dir / "report.json", r.report.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
  for (const auto &a : r.attacks) {
    std::string lines;
    for (const auto &e : a.exfil) lines += e.to_line() + "\n";
    ok = ok && write(dir / "exfil" / (a.spec.id + ".log"), lines);
  }
  if (!ok) return unexpected(ConfigError{ConfigError::Kind::Io, "cannot write outputs under '" + dir.string() + "'"});
  return dir.string();
}

policy::OutcomeMatrix run_matrix(const Scenario &s, const std::vector<policy::Policy> &policies, bool parallel) {
  return policy::evaluate_matrix(
      policies, [&s](const policy::Policy &p) { return run_scenario(s, p).outcome(); }, parallel);
}

}  // namespace ebpfsim::harness
