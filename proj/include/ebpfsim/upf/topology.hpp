/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <string>
#include <vector>

#include "ebpfsim/bpf/program.hpp"
#include "ebpfsim/kernel/kernel.hpp"
#include "ebpfsim/upf/user_plane.hpp"

namespace ebpfsim::upf {

struct TopologyConfig {
  std::size_t slices = 2;
  std::uint64_t seed = 1;
  TrafficConfig traffic;
  std::uint32_t uplink_batches = 8;
  std::uint32_t downlink_batches = 4;
  std::uint32_t batch_size = 32;
  Tick traffic_start = 20;
  Tick batch_period = 5;
  Tick udm_reload_period = 40;
  /// When false the eUPF daemons never load their XDP program.
  bool load_xdp = true;
};

struct Topology {
  std::vector<SliceSpec> slices;
  std::vector<ContainerId> upfs;
  std::vector<ContainerId> network_functions;  // amf, smf, nrf, udm
  std::string udm_config_path;
  std::string udm_k;
  std::string udm_opc;
};

inline constexpr std::string_view kUdmConfigPath = "/etc/open5gs/udm.yaml";

/// Helpers the eUPF data path program needs.
bpf::HelperSet eupf_helpers();
/// The XDP object an eUPF daemon loads for its own container.
bpf::BpfObject eupf_xdp_object(const ContainerId &upf);

/// Core network functions, one eUPF per slice, a gNB traffic source and one
/// data network per slice. Registers the user plane as the kernel's network.
Expected<Topology, std::string> build_topology(kernel::Kernel &k, UserPlane &plane, const TopologyConfig &config);

}  // namespace ebpfsim::upf
