#include "modulo/dates.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>

namespace modulo {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr std::array<const char*, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

}  // namespace

bool Date::valid() const {
  if (month < 1 || month > 12 || day < 1) return false;
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                  std::chrono::day{day}};
  return ymd.ok();
}

std::optional<Date> Date::from_iso(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == 4 || i == 7) continue;
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  }
  y = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
  m = (text[5] - '0') * 10u + (text[6] - '0');
  d = (text[8] - '0') * 10u + (text[9] - '0');
  Date date{y, m, d};
  if (!date.valid()) return std::nullopt;
  return date;
}

std::optional<Date> Date::from_month_name(std::string_view month, unsigned day, int year) {
  std::string m = lower(month);
  for (unsigned i = 0; i < kMonths.size(); ++i) {
    if (m == kMonths[i]) {
      Date date{year, i + 1, day};
      if (!date.valid()) return std::nullopt;
      return date;
    }
  }
  return std::nullopt;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

Date Date::plus_days(int n) const {
  using namespace std::chrono;
  sys_days base = sys_days{year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}}};
  year_month_day shifted{base + days{n}};
  return Date{static_cast<int>(shifted.year()), static_cast<unsigned>(shifted.month()),
              static_cast<unsigned>(shifted.day())};
}

std::optional<int> parse_time_of_day(std::string_view text) {
  unsigned h = 0, m = 0;
  int consumed = 0;
  std::string s(text);
  if (std::sscanf(s.c_str(), "%u:%u%n", &h, &m, &consumed) != 2) return std::nullopt;
  if (static_cast<std::size_t>(consumed) != s.size() || h > 23 || m > 59) return std::nullopt;
  return static_cast<int>(h * 60 + m);
}

std::string format_time_of_day(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

std::optional<int> parse_duration_minutes(std::string_view text) {
  std::string s = lower(text);
  unsigned h = 0, m = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%u hours %u minutes%n", &h, &m, &consumed) == 2 &&
      static_cast<std::size_t>(consumed) == s.size())
    return static_cast<int>(h * 60 + m);
  if (std::sscanf(s.c_str(), "%u:%u%n", &h, &m, &consumed) == 2 &&
      static_cast<std::size_t>(consumed) == s.size() && m < 60)
    return static_cast<int>(h * 60 + m);
  if (std::sscanf(s.c_str(), "%u%n", &m, &consumed) == 1 &&
      static_cast<std::size_t>(consumed) == s.size())
    return static_cast<int>(m);
  return std::nullopt;
}

}  // namespace modulo
