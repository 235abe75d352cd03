/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace ebpfsim {

/// 64-bit FNV-1a. Stable across platforms, used for scenario hashes and
/// log digests.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);
std::string to_hex(std::string_view bytes);

bool ends_with(std::string_view s, std::string_view suffix);

/// Seeded generator whose output sequence does not depend on the standard
/// library's distribution implementations.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// True with probability numer/denom.
  bool chance(std::uint64_t numer, std::uint64_t denom) { return below(denom) < numer; }
  std::string hex_string(std::size_t nibbles);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ebpfsim
