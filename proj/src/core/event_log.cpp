/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/core/event_log.hpp"

#include <ostream>

namespace ebpfsim {

std::string dump_compact(const OrderedJson &j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string LogRecord::to_line() const {
  OrderedJson j;
  j["tick"] = tick;
  j["kind"] = kind;
  j["pid"] = pid;
  j["container"] = container;
  j["detail"] = detail;
  return dump_compact(j);
}

LogRecord LogRecord::from_json(const OrderedJson &j) {
  LogRecord r;
  r.tick = j.at("tick").get<Tick>();
  r.kind = j.at("kind").get<std::string>();
  r.pid = j.at("pid").get<std::uint32_t>();
  r.container = j.at("container").get<std::string>();
  r.detail = j.at("detail");
  return r;
}

void EventLog::append(Tick tick, std::string kind, std::uint32_t pid, ContainerId container,
                      OrderedJson detail) {
  records_.push_back(
      LogRecord{tick, std::move(kind), pid, std::move(container), std::move(detail)});
}

std::string EventLog::serialize() const {
  std::string out;
  for (const auto &r : records_) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

void EventLog::write(std::ostream &out) const {
  for (const auto &r : records_) out << r.to_line() << '\n';
}

}  // namespace ebpfsim
