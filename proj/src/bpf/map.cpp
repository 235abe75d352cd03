/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/bpf/map.hpp"

#include <limits>

namespace ebpfsim::bpf {

std::string_view to_string(KeyType t) {
  switch (t) {
    case KeyType::U32: return "u32";
    case KeyType::U64: return "u64";
    case KeyType::Bytes16: return "bytes16";
  }
  return "?";
}

std::string_view to_string(ValueType t) { return t == ValueType::U64 ? "u64" : "bytes"; }

std::optional<KeyType> parse_key_type(std::string_view text) {
  if (text == "u32") return KeyType::U32;
  if (text == "u64") return KeyType::U64;
  if (text == "bytes16") return KeyType::Bytes16;
  return std::nullopt;
}

std::optional<ValueType> parse_value_type(std::string_view text) {
  if (text == "u64") return ValueType::U64;
  if (text == "bytes") return ValueType::Bytes;
  return std::nullopt;
}

std::string_view to_string(MapError e) {
  switch (e) {
    case MapError::Full: return "MapFull";
    case MapError::KeyTypeMismatch: return "KeyTypeMismatch";
    case MapError::ValueTypeMismatch: return "ValueTypeMismatch";
    case MapError::NotFound: return "KeyNotFound";
  }
  return "?";
}

Expected<MapScalar, MapError> BpfMap::normalize_key(const MapScalar &key) const {
  switch (spec_.key_type) {
    case KeyType::U32: {
      const auto *v = std::get_if<std::uint64_t>(&key);
      if (v == nullptr || *v > std::numeric_limits<std::uint32_t>::max()) {
        return unexpected(MapError::KeyTypeMismatch);
      }
      return key;
    }
    case KeyType::U64:
      if (!std::holds_alternative<std::uint64_t>(key)) return unexpected(MapError::KeyTypeMismatch);
      return key;
    case KeyType::Bytes16: {
      const auto *b = std::get_if<Bytes>(&key);
      if (b == nullptr || b->size() > 16) return unexpected(MapError::KeyTypeMismatch);
      Bytes padded = *b;
      padded.resize(16, '\0');
      return MapScalar(std::move(padded));
    }
  }
  return unexpected(MapError::KeyTypeMismatch);
}

Expected<void, MapError> BpfMap::update(const MapScalar &key, MapScalar value) {
  auto k = normalize_key(key);
  if (!k) return unexpected(k.error());
  const bool value_ok = spec_.value_type == ValueType::U64 ? std::holds_alternative<std::uint64_t>(value)
                                                           : std::holds_alternative<Bytes>(value);
  if (!value_ok) return unexpected(MapError::ValueTypeMismatch);

  auto it = entries_.find(*k);
  if (it != entries_.end()) {
    it->second = std::move(value);
    return {};
  }
  if (entries_.size() >= spec_.capacity) return unexpected(MapError::Full);
  entries_.emplace(std::move(*k), std::move(value));
  return {};
}

Expected<MapScalar, MapError> BpfMap::lookup(const MapScalar &key) const {
  auto k = normalize_key(key);
  if (!k) return unexpected(k.error());
  auto it = entries_.find(*k);
  if (it == entries_.end()) return unexpected(MapError::NotFound);
  return it->second;
}

Expected<void, MapError> BpfMap::erase(const MapScalar &key) {
  auto k = normalize_key(key);
  if (!k) return unexpected(k.error());
  if (entries_.erase(*k) == 0) return unexpected(MapError::NotFound);
  return {};
}

}  // namespace ebpfsim::bpf
