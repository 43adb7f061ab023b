#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace landbubble {

/// Calendar date, stored as days since 1970-01-01 (proleptic Gregorian, UTC).
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}
  Date(int year, unsigned month, unsigned day);

  /// Parses "YYYY-MM-DD". Throws ValidationError on anything else.
  static Date parse(std::string_view text);

  /// Parses an ISO-8601 timestamp ("YYYY-MM-DD", "YYYY-MM-DDThh:mm[:ss[.f]]"
  /// with optional "Z" or "+hh:mm" offset) and returns its UTC calendar date.
  static Date parse_timestamp_utc(std::string_view text);

  [[nodiscard]] constexpr std::int32_t days_since_epoch() const noexcept { return days_; }
  [[nodiscard]] std::chrono::sys_days sys_days() const noexcept {
    return std::chrono::sys_days{std::chrono::days{days_}};
  }

  /// 1 = Monday ... 7 = Sunday.
  [[nodiscard]] unsigned iso_weekday() const noexcept;
  /// Monday of the ISO week containing this date.
  [[nodiscard]] Date iso_week_start() const noexcept;

  [[nodiscard]] std::string to_string() const;

  constexpr Date operator+(std::int32_t days) const noexcept { return Date{days_ + days}; }
  constexpr Date operator-(std::int32_t days) const noexcept { return Date{days_ - days}; }
  constexpr std::int32_t operator-(Date other) const noexcept { return days_ - other.days_; }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace landbubble
