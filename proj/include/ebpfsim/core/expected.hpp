/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#pragma once

#include <cassert>
#include <type_traits>
#include <utility>
#include <variant>

namespace ebpfsim {

template <typename E>
struct Unexpected {
  E error;
};

template <typename E>
Unexpected<std::decay_t<E>> unexpected(E &&e) {
  return {std::forward<E>(e)};
}

/// Value-or-error holder in the spirit of std::expected (C++23).
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
  template <typename G>
  Expected(Unexpected<G> err) : storage_(std::in_place_index<1>, E(std::move(err.error))) {}

  bool has_value() const { return storage_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  T &value() & {
    assert(has_value());
    return std::get<0>(storage_);
  }
  const T &value() const & {
    assert(has_value());
    return std::get<0>(storage_);
  }
  T &&value() && {
    assert(has_value());
    return std::get<0>(std::move(storage_));
  }
  const E &error() const {
    assert(!has_value());
    return std::get<1>(storage_);
  }

  T *operator->() { return &value(); }
  const T *operator->() const { return &value(); }
  T &operator*() { return value(); }
  const T &operator*() const { return value(); }

 private:
  std::variant<T, E> storage_;
};

template <typename E>
class Expected<void, E> {
 public:
  Expected() = default;
  template <typename G>
  Expected(Unexpected<G> err) : error_(E(std::move(err.error))), ok_(false) {}

  bool has_value() const { return ok_; }
  explicit operator bool() const { return ok_; }
  const E &error() const {
    assert(!ok_);
    return error_;
  }

 private:
  E error_{};
  bool ok_ = true;
};

}  // namespace ebpfsim
