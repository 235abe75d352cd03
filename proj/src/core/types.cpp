/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/core/types.hpp"

#include <algorithm>
#include <array>

namespace ebpfsim {
namespace {
constexpr std::array<std::string_view, kCapabilityCount> kCapNames = {"NET_ADMIN", "SYS_ADMIN",
                                                                      "BPF"};
}  // namespace

std::string_view to_string(Capability cap) { return kCapNames[static_cast<std::size_t>(cap)]; }

std::optional<Capability> parse_capability(std::string_view text) {
  if (text.substr(0, 4) == "CAP_") text.remove_prefix(4);
  for (std::size_t i = 0; i < kCapNames.size(); ++i) {
    if (kCapNames[i] == text) return static_cast<Capability>(i);
  }
  return std::nullopt;
}

std::string CapabilitySet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kCapabilityCount; ++i) {
    if (!bits_.test(i)) continue;
    if (!out.empty()) out += ',';
    out += kCapNames[i];
  }
  return out;
}

Comm::Comm(std::string_view name) {
  const auto n = std::min(name.size(), kSize - 1);
  std::copy_n(name.data(), n, buf_.begin());
}

std::string_view Comm::view() const {
  std::string_view all(buf_.data(), buf_.size());
  return all.substr(0, all.find('\0'));
}

}  // namespace ebpfsim
