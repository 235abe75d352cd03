/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <map>
#include <string>
#include <utility>

#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/core/types.hpp"

namespace ebpfsim::kernel {

struct FileNode {
  std::string path;
  NamespaceId ns;
  Bytes contents;
  bool sensitive = false;  // reporting label only
};

/// In-memory path -> bytes store, one tree per mount namespace. Lookups never
/// cross namespaces.
class VirtualFs {
 public:
  using Key = std::pair<NamespaceId, std::string>;

  Expected<void, std::string> add(FileNode node);
  const FileNode *find(NamespaceId ns, const std::string &path) const;
  FileNode *find(NamespaceId ns, const std::string &path);
  const std::map<Key, FileNode> &nodes() const { return nodes_; }

 private:
  std::map<Key, FileNode> nodes_;
};

}  // namespace ebpfsim::kernel
