/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/kernel/vfs.hpp"

namespace ebpfsim::kernel {

Expected<void, std::string> VirtualFs::add(FileNode node) {
  if (node.path.empty() || node.path.front() != '/') {
    return unexpected("path '" + node.path + "' is not absolute");
  }
  Key key{node.ns, node.path};
  if (nodes_.contains(key)) {
    return unexpected("file '" + node.path + "' already exists in namespace " +
                      std::to_string(node.ns.value()));
  }
  nodes_.emplace(std::move(key), std::move(node));
  return {};
}

const FileNode *VirtualFs::find(NamespaceId ns, const std::string &path) const {
  auto it = nodes_.find(Key{ns, path});
  return it == nodes_.end() ? nullptr : &it->second;
}

FileNode *VirtualFs::find(NamespaceId ns, const std::string &path) {
  auto it = nodes_.find(Key{ns, path});
  return it == nodes_.end() ? nullptr : &it->second;
}

}  // namespace ebpfsim::kernel
