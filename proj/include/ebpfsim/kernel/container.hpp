/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include "ebpfsim/core/types.hpp"

namespace ebpfsim::kernel {

struct ContainerSpec {
  ContainerId id;
  CapabilitySet caps;
  bool bpffs_mounted = false;
  bool managed = false;  // the orchestrator restarts its processes
  bool host = false;     // runs in the host namespace instead of a fresh one
};

struct Container {
  ContainerId id;
  NamespaceId ns;
  CapabilitySet caps;  // fixed at creation
  bool bpffs_mounted = false;
  bool managed = false;
  bool host = false;
};

}  // namespace ebpfsim::kernel
