/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ebpfsim/core/event_log.hpp"
#include "ebpfsim/core/expected.hpp"

namespace ebpfsim {

struct ConfigError {
  enum class Kind { Io, Parse, Validation };
  Kind kind = Kind::Validation;
  std::string message;
  std::size_t line = 0;  // 1-based; 0 when not applicable
  std::size_t column = 0;

  std::string to_string() const;
};

Expected<std::string, ConfigError> read_text_file(const std::string &path);

/// Parses JSON, reporting syntax errors with line and column.
Expected<OrderedJson, ConfigError> parse_json_text(std::string_view text);

/// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

/// Thrown by JsonObject accessors; converted to a ConfigError at API
/// boundaries.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Typed, path-aware view of a JSON object for config validation.
class JsonObject {
 public:
  JsonObject(const OrderedJson &j, std::string path);

  const std::string &path() const { return path_; }
  std::string path(std::string_view key) const { return path_ + "." + std::string(key); }

  bool has(std::string_view key) const;
  const OrderedJson &req(std::string_view key) const;
  const OrderedJson *opt(std::string_view key) const;

  std::string str(std::string_view key) const;
  std::string str(std::string_view key, std::string fallback) const;
  std::uint64_t u64(std::string_view key) const;
  std::uint64_t u64(std::string_view key, std::uint64_t fallback) const;
  bool boolean(std::string_view key, bool fallback) const;
  /// Optional array of strings; absent means empty.
  std::vector<std::string> strings(std::string_view key) const;
  JsonObject object(std::string_view key) const;

  void reject_unknown(std::initializer_list<std::string_view> allowed) const;

 private:
  const OrderedJson &j_;
  std::string path_;
};

}  // namespace ebpfsim
