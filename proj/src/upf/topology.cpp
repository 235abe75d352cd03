/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/upf/topology.hpp"

#include <sstream>

#include "ebpfsim/core/util.hpp"

namespace ebpfsim::upf {
namespace {

using kernel::WorkloadStep;
using Op = WorkloadStep::Op;

WorkloadStep step(Op op) {
  WorkloadStep s;
  s.op = op;
  return s;
}

WorkloadStep open_step(std::string path) {
  auto s = step(Op::Openat);
  s.path = std::move(path);
  return s;
}

WorkloadStep send_step(std::string iface, std::string peer, std::uint64_t count) {
  auto s = step(Op::Sendmsg);
  s.iface = std::move(iface);
  s.peer = std::move(peer);
  s.count = count;
  return s;
}

WorkloadStep sleep_step(Tick ticks) {
  auto s = step(Op::Sleep);
  s.ticks = ticks;
  return s;
}

std::string slice_letter(std::size_t i) { return std::string(1, static_cast<char>('a' + i)); }

std::string nf_config(const std::string &nf) {
  std::ostringstream out;
  out << nf << ":\n  sbi:\n    server:\n      - address: " << nf << ".open5gs.org\n        port: 7777\n"
      << "logger:\n  level: info\n";
  return out.str();
}

}  // namespace

bpf::HelperSet eupf_helpers() { return {bpf::Helper::MapLookup, bpf::Helper::MapUpdate}; }

bpf::BpfObject eupf_xdp_object(const ContainerId &upf) {
  bpf::EbpfProgram prog;
  prog.id = "eupf_xdp";
  prog.owner = upf;
  prog.hook = bpf::HookPoint::xdp();
  bpf::Rule lookup;
  lookup.actions.push_back({bpf::Helper::MapLookup,
                            {bpf::Operand::map("pfcp_sessions"), bpf::Operand::u64(0)},
                            std::string("session")});
  lookup.actions.push_back({bpf::Helper::MapUpdate,
                            {bpf::Operand::map("upf_stats"), bpf::Operand::u64(0), bpf::Operand::u64(1)},
                            std::nullopt});
  prog.rules.push_back(std::move(lookup));
  bpf::finalize(prog);

  bpf::BpfObject obj;
  obj.id = "eupf-xdp-" + upf;
  obj.maps.push_back({"pfcp_sessions", bpf::KeyType::U32, bpf::ValueType::U64, 65536});
  obj.maps.push_back({"upf_stats", bpf::KeyType::U32, bpf::ValueType::U64, 16});
  obj.programs.push_back(std::move(prog));
  return obj;
}

Expected<Topology, std::string> build_topology(kernel::Kernel &k, UserPlane &plane, const TopologyConfig &config) {
  if (config.slices == 0 || config.slices > 26) return unexpected(std::string("slice count must be 1..26"));
  Topology topo;
  DeterministicRng rng(config.seed ^ 0x5bd1e995ULL);
  std::string error;

  auto check = [&error](auto &&r) {
    if (!r && error.empty()) error = std::string(r.error());
  };
  auto container = [&](const ContainerId &id, CapabilitySet caps, bool bpffs) {
    check(k.create_container({id, caps, bpffs, true, false}));
  };
  auto workload = [&](std::string id, std::vector<WorkloadStep> steps, std::size_t loop_start, Tick period) {
    kernel::Workload w{std::move(id), std::move(steps), true, period, loop_start};
    check(k.add_workload(std::move(w)));
  };
  auto spawn = [&](const ContainerId &c, std::string_view comm, const std::string &w, Tick delay) {
    auto pid = k.spawn_process(c, comm, 0, 0, w, delay);
    if (!pid && error.empty()) error = "cannot spawn '" + w + "' in '" + c + "'";
  };

  topo.udm_config_path = std::string(kUdmConfigPath);
  topo.udm_k = rng.hex_string(32);
  topo.udm_opc = rng.hex_string(32);

  for (const std::string nf : {"amf", "smf", "nrf", "udm"}) {
    container(nf, {}, false);
    topo.network_functions.push_back(nf);
  }
  for (const std::string nf : {"amf", "smf", "nrf"}) {
    check(k.add_file(nf, "/etc/open5gs/" + nf + ".yaml", nf_config(nf)));
  }
  {
    std::ostringstream udm;
    udm << nf_config("udm") << "subscriber:\n  imsi: 001010000000001\n  k: " << topo.udm_k
        << "\n  opc: " << topo.udm_opc << "\n  amf: 8000\n";
    check(k.add_file("udm", topo.udm_config_path, udm.str(), true));
  }

  CapabilitySet upf_caps;
  upf_caps.insert(Capability::NetAdmin);
  upf_caps.insert(Capability::SysAdmin);
  for (std::size_t i = 0; i < config.slices; ++i) {
    const auto letter = slice_letter(i);
    SliceSpec s{"01-00000" + std::to_string(i + 1), "upf-" + letter, "dn-" + letter};
    container(s.upf, upf_caps, true);
    container(s.dn, {}, false);
    plane.add_upf(s.upf);
    topo.upfs.push_back(s.upf);
    topo.slices.push_back(std::move(s));
  }
  container("gnb", {}, false);
  if (!error.empty()) return unexpected(error);

  // Control plane daemons: read their config once, then idle.
  for (const std::string nf : {"amf", "nrf"}) {
    workload("nf-" + nf, {open_step("/etc/open5gs/" + nf + ".yaml"), step(Op::Read), step(Op::Close), step(Op::Getpid)},
             3, 10);
    spawn(nf, "open5gs-" + nf + "d", "nf-" + nf, 1);
  }
  // The UDM reloads its subscriber database periodically.
  workload("nf-udm", {open_step(topo.udm_config_path), step(Op::Read), step(Op::Close), step(Op::Getpid)}, 0,
           config.udm_reload_period);
  spawn("udm", "open5gs-udmd", "nf-udm", 1);

  // SMF: install every planned session over N4, then idle.
  {
    std::vector<WorkloadStep> steps{open_step("/etc/open5gs/smf.yaml"), step(Op::Read), step(Op::Close)};
    for (const auto &s : topo.slices) steps.push_back(send_step("n4", s.upf, config.traffic.sessions_per_slice));
    steps.push_back(step(Op::Getpid));
    const auto loop = steps.size() - 1;
    workload("nf-smf", std::move(steps), loop, 10);
    spawn("smf", "open5gs-smfd", "nf-smf", 2);
  }

  for (const auto &s : topo.slices) {
    std::vector<WorkloadStep> steps;
    if (config.load_xdp) {
      auto load = step(Op::BpfLoad);
      load.object = "eupf-xdp-" + s.upf;
      steps.push_back(load);
      check(k.add_object(eupf_xdp_object(s.upf)));
    }
    steps.push_back(step(Op::Getpid));
    const auto loop = steps.size() - 1;
    workload("eupf-" + s.upf, std::move(steps), loop, 10);
    spawn(s.upf, "eupfd", "eupf-" + s.upf, 0);

    std::vector<WorkloadStep> dl;
    for (std::uint32_t b = 0; b < config.downlink_batches; ++b) {
      dl.push_back(send_step("n6", s.upf, config.batch_size));
      dl.push_back(sleep_step(config.batch_period));
    }
    dl.push_back(sleep_step(config.batch_period));
    const auto dl_loop = dl.size() - 1;
    workload("dn-" + s.upf, std::move(dl), dl_loop, 10);
    spawn(s.dn, "dn-sim", "dn-" + s.upf, config.traffic_start + 1);
  }

  {
    std::vector<WorkloadStep> ul;
    for (std::uint32_t b = 0; b < config.uplink_batches; ++b) {
      for (const auto &s : topo.slices) ul.push_back(send_step("n3", s.upf, config.batch_size));
      ul.push_back(sleep_step(config.batch_period));
    }
    ul.push_back(sleep_step(config.batch_period));
    const auto ul_loop = ul.size() - 1;
    workload("gnb-uplink", std::move(ul), ul_loop, 10);
    spawn("gnb", "gnb-sim", "gnb-uplink", config.traffic_start);
  }
  if (!error.empty()) return unexpected(error);

  k.set_network(&plane);
  plane.set_traffic(std::make_unique<TrafficGenerator>(config.traffic, topo.slices, config.seed));
  return topo;
}

}  // namespace ebpfsim::upf
