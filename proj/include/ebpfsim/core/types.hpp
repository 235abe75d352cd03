/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ebpfsim {

using Tick = std::uint64_t;
using Bytes = std::string;
using ContainerId = std::string;

template <typename Tag, typename Rep>
class StrongId {
 public:
  using rep_type = Rep;

  constexpr StrongId() = default;
  constexpr explicit StrongId(Rep value) : value_(value) {}

  constexpr Rep value() const { return value_; }

  friend constexpr auto operator<=>(const StrongId &, const StrongId &) = default;

 private:
  Rep value_{};
};

struct PidTag {};
struct NamespaceTag {};

using Pid = StrongId<PidTag, std::uint32_t>;
using NamespaceId = StrongId<NamespaceTag, std::uint32_t>;

/// Namespace 0 belongs to the host; containers get 1, 2, ...
inline constexpr NamespaceId kHostNamespace{0};

enum class Capability : std::uint8_t { NetAdmin = 0, SysAdmin = 1, Bpf = 2 };
inline constexpr std::size_t kCapabilityCount = 3;

std::string_view to_string(Capability cap);
/// Accepts "NET_ADMIN" as well as "CAP_NET_ADMIN".
std::optional<Capability> parse_capability(std::string_view text);

class CapabilitySet {
 public:
  CapabilitySet() = default;
  CapabilitySet(std::initializer_list<Capability> caps) {
    for (auto c : caps) insert(c);
  }

  bool contains(Capability c) const { return bits_.test(index(c)); }
  void insert(Capability c) { bits_.set(index(c)); }
  void erase(Capability c) { bits_.reset(index(c)); }
  bool empty() const { return bits_.none(); }

  /// Names in enum order, comma separated ("" when empty).
  std::string to_string() const;

  friend bool operator==(const CapabilitySet &, const CapabilitySet &) = default;

 private:
  static std::size_t index(Capability c) { return static_cast<std::size_t>(c); }
  std::bitset<kCapabilityCount> bits_;
};

/// Task command name with TASK_COMM_LEN semantics: at most 15 visible
/// bytes plus a terminating NUL; longer names are truncated.
class Comm {
 public:
  static constexpr std::size_t kSize = 16;

  Comm() = default;
  explicit Comm(std::string_view name);

  std::string_view view() const;
  /// The full fixed-size buffer, NUL padded, as bpf_get_current_comm copies it.
  std::string raw() const { return std::string(buf_.data(), buf_.size()); }

  friend bool operator==(const Comm &, const Comm &) = default;

 private:
  std::array<char, kSize> buf_{};
};

}  // namespace ebpfsim

template <typename Tag, typename Rep>
struct std::hash<ebpfsim::StrongId<Tag, Rep>> {
  std::size_t operator()(const ebpfsim::StrongId<Tag, Rep> &id) const noexcept {
    return std::hash<Rep>{}(id.value());
  }
};
