/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ebpfsim/core/types.hpp"
#include "json.hpp"

namespace ebpfsim {

using OrderedJson = nlohmann::ordered_json;

inline constexpr std::string_view kLogSchema = "ebpfsim-log/1";

/// One line of the event log. Serialized with the fixed field order
/// tick, kind, pid, container, detail.
struct LogRecord {
  Tick tick = 0;
  std::string kind;
  std::uint32_t pid = 0;
  ContainerId container;
  OrderedJson detail = OrderedJson::object();

  std::string to_line() const;
  static LogRecord from_json(const OrderedJson &j);
};

class EventLog {
 public:
  void append(LogRecord record) { records_.push_back(std::move(record)); }
  void append(Tick tick, std::string kind, std::uint32_t pid, ContainerId container,
              OrderedJson detail);

  const std::vector<LogRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Newline-delimited serialization; each line ends with '\n'.
  std::string serialize() const;
  void write(std::ostream &out) const;

 private:
  std::vector<LogRecord> records_;
};

/// Dumps JSON compactly; invalid UTF-8 bytes are replaced instead of throwing.
std::string dump_compact(const OrderedJson &j);

}  // namespace ebpfsim
