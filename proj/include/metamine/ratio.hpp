#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace metamine {

// Exact non-negative rational kept in lowest terms. A zero denominator is
// only accepted together with a zero numerator and collapses to 0, which is
// the convention used for the fraction of an empty relation.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::uint64_t numerator, std::uint64_t denominator);

  static Ratio zero() { return {}; }
  static Ratio one() { return {1, 1}; }

  // Accepts "3/4", "0.75", "1", ".5". Decimal input is converted exactly.
  static Ratio parse(std::string_view text);

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }

  double approx() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "num/den", always with an explicit denominator ("1/1", "0/1").
  std::string to_string() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace metamine
