#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace modulo {

/// Calendar date. Construction validates against the proleptic Gregorian
/// calendar; iso() is the canonical wire form ("2022-03-13").
struct Date {
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;

  static std::optional<Date> from_iso(std::string_view text);

  /// Month-name forms: "March 13", "March 13th". Year supplied separately.
  static std::optional<Date> from_month_name(std::string_view month, unsigned day, int year);

  std::string iso() const;
  Date plus_days(int n) const;
  bool valid() const;

  auto operator<=>(const Date&) const = default;
};

/// Minutes since midnight; parses "08:05". Used for flight dep/arr times.
std::optional<int> parse_time_of_day(std::string_view text);
std::string format_time_of_day(int minutes);

/// Duration in minutes. Accepts "95", "1:35", and "1 hours 35 minutes".
std::optional<int> parse_duration_minutes(std::string_view text);

}  // namespace modulo
