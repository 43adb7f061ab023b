#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landbubble/date.hpp"

namespace landbubble {

enum class Frequency { daily, weekly };

[[nodiscard]] std::string_view to_string(Frequency freq) noexcept;
[[nodiscard]] Frequency parse_frequency(std::string_view text);
/// Calendar spacing of consecutive observations: 1 for daily, 7 for weekly.
[[nodiscard]] constexpr std::int32_t step_days(Frequency freq) noexcept {
  return freq == Frequency::daily ? 1 : 7;
}

/// Ordered (date, value) observations at a declared frequency.
///
/// Dates are strictly increasing; weekly series keep a multiple-of-7 spacing,
/// so a missing week shows up as a 14-day jump rather than a shifted grid.
/// Values are always finite.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::string name, Frequency freq, std::vector<Date> dates, std::vector<double> values);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] Frequency freq() const noexcept { return freq_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] Date date(std::size_t i) const { return dates_.at(i); }
  [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }

  /// Index of the observation dated `d`, if present.
  [[nodiscard]] std::optional<std::size_t> find(Date d) const noexcept;

  /// True when some consecutive pair is further apart than one step.
  [[nodiscard]] bool has_gaps() const noexcept;
  /// Dates that are missing between the first and last observation.
  [[nodiscard]] std::vector<Date> missing_dates() const;

  /// Observations [first, last) as a new series.
  [[nodiscard]] TimeSeries slice(std::size_t first, std::size_t last) const;
  /// Observations dated within [from, to].
  [[nodiscard]] TimeSeries between(Date from, Date to) const;

  [[nodiscard]] TimeSeries renamed(std::string name) const;

 private:
  std::string name_;
  Frequency freq_ = Frequency::daily;
  std::vector<Date> dates_;
  std::vector<double> values_;
};

}  // namespace landbubble
