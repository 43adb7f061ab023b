#include "landbubble/date.hpp"

#include <charconv>
#include <cstdio>

#include "landbubble/error.hpp"

namespace landbubble {

namespace {

bool parse_uint(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

[[noreturn]] void bad_date(std::string_view text) {
  throw ValidationError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
  }
  days_ = static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad_date(text);
  int y = 0, m = 0, d = 0;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
      !parse_uint(text.substr(8, 2), d)) {
    bad_date(text);
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad_date(text);
  return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
}

Date Date::parse_timestamp_utc(std::string_view text) {
  if (text.size() < 10) bad_date(text);
  Date date = parse(text.substr(0, 10));
  std::string_view rest = text.substr(10);
  if (rest.empty()) return date;
  if (rest.front() != 'T' && rest.front() != ' ') bad_date(text);
  rest.remove_prefix(1);

  auto fail = [&] { throw ValidationError("invalid timestamp '" + std::string(text) + "'"); };
  auto two_digits = [&](std::string_view s, int hi) {
    int v = 0;
    if (s.size() < 2 || !parse_uint(s.substr(0, 2), v) || v > hi) fail();
    return v;
  };

  const int hour = two_digits(rest, 23);
  if (rest.size() < 5 || rest[2] != ':') fail();
  const int minute = two_digits(rest.substr(3), 59);
  rest.remove_prefix(5);
  if (!rest.empty() && rest.front() == ':') {
    two_digits(rest.substr(1), 60);
    rest.remove_prefix(3);
    if (!rest.empty() && rest.front() == '.') {
      rest.remove_prefix(1);
      std::size_t n = 0;
      while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
      if (n == 0) fail();
      rest.remove_prefix(n);
    }
  }

  int offset_minutes = 0;
  if (rest == "Z" || rest.empty()) {
    offset_minutes = 0;
  } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
    const int sign = rest.front() == '+' ? 1 : -1;
    offset_minutes = sign * (two_digits(rest.substr(1), 23) * 60 + two_digits(rest.substr(4), 59));
  } else {
    fail();
  }

  // Local time minus offset gives UTC.
  const int utc_minutes = hour * 60 + minute - offset_minutes;
  int shift = 0;
  if (utc_minutes < 0) shift = -1;
  if (utc_minutes >= 24 * 60) shift = 1;
  return date + shift;
}

unsigned Date::iso_weekday() const noexcept {
  return std::chrono::weekday{sys_days()}.iso_encoding();
}

Date Date::iso_week_start() const noexcept {
  return *this - static_cast<std::int32_t>(iso_weekday() - 1);
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{sys_days()};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace landbubble
