#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace metamine {

// An opaque database constant. Tokens are interned in a process-wide table so
// that equality is a single integer compare; two values are equal iff their
// tokens are byte-identical. No numeric interpretation is ever applied.
class Value {
 public:
  Value() = default;

  static Value of(std::string_view token);

  std::string_view text() const;
  std::uint32_t id() const { return id_; }

  // Ordering follows interning order. It is only used to canonicalize
  // relations and carries no meaning.
  friend auto operator<=>(Value, Value) = default;

 private:
  explicit Value(std::uint32_t id) : id_(id) {}

  std::uint32_t id_ = 0;
};

}  // namespace metamine

template <>
struct std::hash<metamine::Value> {
  std::size_t operator()(metamine::Value v) const noexcept { return std::hash<std::uint32_t>{}(v.id()); }
};
