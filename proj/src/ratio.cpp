#include "metamine/ratio.hpp"

#include <charconv>
#include <numeric>

#include "metamine/error.hpp"

namespace metamine {

namespace {
__extension__ typedef unsigned __int128 wide;
}  // namespace

Ratio::Ratio(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) {
    if (numerator != 0) throw ValidationError("ratio with zero denominator");
    return;
  }
  if (numerator == 0) return;
  const auto g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const wide lhs = static_cast<wide>(a.num_) * b.den_;
  const wide rhs = static_cast<wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Ratio::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

namespace {

std::uint64_t parse_digits(std::string_view digits, std::string_view whole) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw ValidationError("malformed rational '" + std::string(whole) + "'");
  return out;
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Ratio Ratio::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = text.substr(0, slash);
    auto d = text.substr(slash + 1);
    if (n.empty() || d.empty() || !all_digits(n) || !all_digits(d))
      throw ValidationError("malformed rational '" + std::string(text) + "'");
    const auto den = parse_digits(d, text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    return {parse_digits(n, text), den};
  }
  auto dot = text.find('.');
  auto int_part = text.substr(0, dot);
  auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) || !all_digits(int_part) || !all_digits(frac_part))
    throw ValidationError("malformed rational '" + std::string(text) + "'");
  if (frac_part.size() > 18) throw ValidationError("too many decimal digits in '" + std::string(text) + "'");
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::uint64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
  const std::uint64_t frac = frac_part.empty() ? 0 : parse_digits(frac_part, text);
  const wide num = static_cast<wide>(whole) * scale + frac;
  if (num > UINT64_MAX) throw ValidationError("rational out of range '" + std::string(text) + "'");
  return {static_cast<std::uint64_t>(num), scale};
}

}  // namespace metamine
