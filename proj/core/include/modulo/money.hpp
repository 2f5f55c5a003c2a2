#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace modulo {

/// Fixed-point currency amount with two decimal places, stored as integer
/// cents. Budget pass/fail comparisons must be exact, so no float arithmetic
/// leaks into totals: sums and integer scaling stay in cents, and the only
/// rounding point is from_dollars().
class Money {
public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }

  /// Rounds half away from zero to the nearest cent.
  static Money from_dollars(double dollars);

  /// Accepts "120", "120.5", "1,400.00", "$1,400"; rejects anything else
  /// (more than two decimals, stray characters, empty).
  static std::optional<Money> parse(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }
  double dollars() const { return static_cast<double>(cents_) / 100.0; }

  /// "1400.00": always two decimals, no separators.
  std::string str() const;

  constexpr Money operator+(Money o) const { return Money(cents_ + o.cents_); }
  constexpr Money operator-(Money o) const { return Money(cents_ - o.cents_); }
  constexpr Money operator*(std::int64_t n) const { return Money(cents_ * n); }
  Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  auto operator<=>(const Money&) const = default;

private:
  explicit constexpr Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

}  // namespace modulo
