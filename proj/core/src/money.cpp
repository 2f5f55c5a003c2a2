#include "modulo/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace modulo {

Money Money::from_dollars(double dollars) {
  return Money(static_cast<std::int64_t>(std::llround(dollars * 100.0)));
}

std::optional<Money> Money::parse(std::string_view text) {
  std::string digits;
  digits.reserve(text.size());
  bool negative = false;
  bool seen_dot = false;
  int decimals = 0;
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '$') ++i;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i < text.size() && text[i] == '$') ++i;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == ',') continue;  // thousands separator
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (seen_dot && ++decimals > 2) return std::nullopt;
      if (!seen_dot || decimals <= 2) digits.push_back(c);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i != text.size()) return std::nullopt;
      break;
    }
    return std::nullopt;
  }
  if (digits.empty() || (seen_dot && decimals == 0)) return std::nullopt;
  std::int64_t whole_and_frac = 0;
  for (char c : digits) whole_and_frac = whole_and_frac * 10 + (c - '0');
  for (int d = decimals; d < 2; ++d) whole_and_frac *= 10;
  return Money(negative ? -whole_and_frac : whole_and_frac);
}

std::string Money::str() const {
  std::int64_t c = cents_;
  char sign[2] = "";
  if (c < 0) {
    sign[0] = '-';
    c = -c;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", sign, static_cast<long long>(c / 100),
                static_cast<long long>(c % 100));
  return buf;
}

}  // namespace modulo
