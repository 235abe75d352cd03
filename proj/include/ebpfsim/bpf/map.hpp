/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "ebpfsim/core/expected.hpp"
#include "ebpfsim/core/types.hpp"

namespace ebpfsim::bpf {

enum class KeyType { U32, U64, Bytes16 };
enum class ValueType { U64, Bytes };

std::string_view to_string(KeyType t);
std::string_view to_string(ValueType t);
std::optional<KeyType> parse_key_type(std::string_view text);
std::optional<ValueType> parse_value_type(std::string_view text);

using MapScalar = std::variant<std::uint64_t, Bytes>;

inline constexpr std::size_t kDefaultMapCapacity = 1024;

struct MapSpec {
  std::string name;
  KeyType key_type = KeyType::U32;
  ValueType value_type = ValueType::U64;
  std::size_t capacity = kDefaultMapCapacity;
};

enum class MapError { Full, KeyTypeMismatch, ValueTypeMismatch, NotFound };
std::string_view to_string(MapError e);

/// Hash-map flavoured BPF map. A full map rejects new keys instead of
/// evicting; updating an existing key always succeeds.
class BpfMap {
 public:
  BpfMap(std::string id, MapSpec spec) : id_(std::move(id)), spec_(std::move(spec)) {}

  const std::string &id() const { return id_; }
  const MapSpec &spec() const { return spec_; }

  Expected<void, MapError> update(const MapScalar &key, MapScalar value);
  Expected<MapScalar, MapError> lookup(const MapScalar &key) const;
  Expected<void, MapError> erase(const MapScalar &key);

  std::size_t size() const { return entries_.size(); }
  const std::map<MapScalar, MapScalar> &entries() const { return entries_; }

 private:
  Expected<MapScalar, MapError> normalize_key(const MapScalar &key) const;

  std::string id_;
  MapSpec spec_;
  std::map<MapScalar, MapScalar> entries_;
};

}  // namespace ebpfsim::bpf
