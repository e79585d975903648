#pragma once

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

namespace vjoint {

/// Tag wrapper used to construct an Expected in its error state.
template <class E>
struct Unexpected {
  E error;
};

template <class E>
Unexpected(E) -> Unexpected<E>;

template <class E>
Unexpected<std::decay_t<E>> make_unexpected(E&& e) {
  return {std::forward<E>(e)};
}

/// Minimal value-or-error holder (std::expected is C++23).
template <class T, class E>
class Expected {
 public:
  Expected(const T& value) : storage_(std::in_place_index<0>, value) {}
  Expected(T&& value) : storage_(std::in_place_index<0>, std::move(value)) {}
  template <class G>
  Expected(Unexpected<G> err) : storage_(std::in_place_index<1>, std::move(err.error)) {}

  bool has_value() const noexcept { return storage_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw std::logic_error("Expected::value() on error state");
    return std::get<0>(storage_);
  }
  T& value() & {
    if (!has_value()) throw std::logic_error("Expected::value() on error state");
    return std::get<0>(storage_);
  }
  T&& value() && {
    if (!has_value()) throw std::logic_error("Expected::value() on error state");
    return std::get<0>(std::move(storage_));
  }

  const E& error() const& {
    if (has_value()) throw std::logic_error("Expected::error() on value state");
    return std::get<1>(storage_);
  }

  const T& operator*() const& { return value(); }
  T& operator*() & { return value(); }
  const T* operator->() const { return &value(); }
  T* operator->() { return &value(); }

  template <class U>
  T value_or(U&& fallback) const& {
    return has_value() ? std::get<0>(storage_) : static_cast<T>(std::forward<U>(fallback));
  }

 private:
  std::variant<T, E> storage_;
};

}  // namespace vjoint
