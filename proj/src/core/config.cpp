/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include "ebpfsim/core/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ebpfsim {

std::string ConfigError::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Io: out << "io error: "; break;
    case Kind::Parse: out << "parse error"; break;
    case Kind::Validation: out << "validation error: "; break;
  }
  if (kind == Kind::Parse) {
    if (line != 0) out << " at line " << line << ", column " << column;
    out << ": ";
  }
  out << message;
  return out.str();
}

Expected<std::string, ConfigError> read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected(ConfigError{ConfigError::Kind::Io, "cannot open '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Expected<OrderedJson, ConfigError> parse_json_text(std::string_view text) {
  try {
    return OrderedJson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error &e) {
    // e.byte is the 1-based position of the offending character.
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    return unexpected(ConfigError{ConfigError::Kind::Parse, what, line, col});
  }
}

JsonObject::JsonObject(const OrderedJson &j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ValidationError(path_ + " must be an object");
}

bool JsonObject::has(std::string_view key) const { return j_.contains(key); }

const OrderedJson &JsonObject::req(std::string_view key) const {
  auto it = j_.find(key);
  if (it == j_.end()) throw ValidationError(path(key) + " is required");
  return *it;
}

const OrderedJson *JsonObject::opt(std::string_view key) const {
  auto it = j_.find(key);
  return it == j_.end() ? nullptr : &*it;
}

std::string JsonObject::str(std::string_view key) const {
  const auto &v = req(key);
  if (!v.is_string()) throw ValidationError(path(key) + " must be a string");
  return v.get<std::string>();
}

std::string JsonObject::str(std::string_view key, std::string fallback) const {
  return has(key) ? str(key) : fallback;
}

std::uint64_t JsonObject::u64(std::string_view key) const {
  const auto &v = req(key);
  if (!v.is_number_unsigned()) throw ValidationError(path(key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::uint64_t JsonObject::u64(std::string_view key, std::uint64_t fallback) const {
  return has(key) ? u64(key) : fallback;
}

bool JsonObject::boolean(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto &v = req(key);
  if (!v.is_boolean()) throw ValidationError(path(key) + " must be a boolean");
  return v.get<bool>();
}

std::vector<std::string> JsonObject::strings(std::string_view key) const {
  std::vector<std::string> out;
  const auto *v = opt(key);
  if (v == nullptr) return out;
  if (!v->is_array()) throw ValidationError(path(key) + " must be an array of strings");
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_string()) {
      throw ValidationError(path(key) + "[" + std::to_string(i) + "] must be a string");
    }
    out.push_back((*v)[i].get<std::string>());
  }
  return out;
}

JsonObject JsonObject::object(std::string_view key) const { return JsonObject(req(key), path(key)); }

void JsonObject::reject_unknown(std::initializer_list<std::string_view> allowed) const {
  for (const auto &[k, v] : j_.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ValidationError(path(k) + " is not a recognized field");
    }
  }
}

}  // namespace ebpfsim
