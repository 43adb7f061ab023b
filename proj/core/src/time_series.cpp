#include "landbubble/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "landbubble/error.hpp"

namespace landbubble {

std::string_view to_string(Frequency freq) noexcept {
  return freq == Frequency::daily ? "daily" : "weekly";
}

Frequency parse_frequency(std::string_view text) {
  if (text == "daily") return Frequency::daily;
  if (text == "weekly") return Frequency::weekly;
  throw ValidationError("unknown frequency '" + std::string(text) + "' (expected daily or weekly)");
}

TimeSeries::TimeSeries(std::string name, Frequency freq, std::vector<Date> dates,
                       std::vector<double> values)
    : name_(std::move(name)), freq_(freq), dates_(std::move(dates)), values_(std::move(values)) {
  if (dates_.size() != values_.size()) {
    throw ValidationError("series '" + name_ + "': " + std::to_string(dates_.size()) +
                          " dates but " + std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ValidationError("series '" + name_ + "': non-finite value at " +
                            dates_[i].to_string());
    }
    if (i == 0) continue;
    const std::int32_t gap = dates_[i] - dates_[i - 1];
    if (gap <= 0) {
      throw ValidationError("series '" + name_ + "': dates not strictly increasing at " +
                            dates_[i].to_string());
    }
    if (freq_ == Frequency::weekly && gap % 7 != 0) {
      throw ValidationError("series '" + name_ + "': weekly observations " +
                            dates_[i - 1].to_string() + " and " + dates_[i].to_string() +
                            " are not on a 7-day grid");
    }
  }
}

std::optional<std::size_t> TimeSeries::find(Date d) const noexcept {
  auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

bool TimeSeries::has_gaps() const noexcept {
  const std::int32_t step = step_days(freq_);
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (dates_[i] - dates_[i - 1] != step) return true;
  }
  return false;
}

std::vector<Date> TimeSeries::missing_dates() const {
  std::vector<Date> out;
  const std::int32_t step = step_days(freq_);
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    for (Date d = dates_[i - 1] + step; d < dates_[i]; d = d + step) out.push_back(d);
  }
  return out;
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t last) const {
  last = std::min(last, size());
  first = std::min(first, last);
  return TimeSeries(name_, freq_, {dates_.begin() + first, dates_.begin() + last},
                    {values_.begin() + first, values_.begin() + last});
}

TimeSeries TimeSeries::between(Date from, Date to) const {
  const auto first = std::lower_bound(dates_.begin(), dates_.end(), from) - dates_.begin();
  const auto last = std::upper_bound(dates_.begin(), dates_.end(), to) - dates_.begin();
  return slice(static_cast<std::size_t>(first), static_cast<std::size_t>(last));
}

TimeSeries TimeSeries::renamed(std::string name) const {
  TimeSeries out = *this;
  out.name_ = std::move(name);
  return out;
}

}  // namespace landbubble
