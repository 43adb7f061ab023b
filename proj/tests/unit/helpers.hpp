#pragma once

#include <string>
#include <vector>

#include "landbubble/rng.hpp"
#include "landbubble/time_series.hpp"

namespace testing_support {

inline landbubble::TimeSeries make_series(const std::vector<double>& values,
                                          landbubble::Frequency freq = landbubble::Frequency::daily,
                                          landbubble::Date start = landbubble::Date(2021, 1, 4),
                                          std::string name = "s") {
  std::vector<landbubble::Date> dates;
  for (std::size_t i = 0; i < values.size(); ++i) {
    dates.push_back(start + static_cast<std::int32_t>(i) * landbubble::step_days(freq));
  }
  return landbubble::TimeSeries(std::move(name), freq, std::move(dates), values);
}

inline std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  landbubble::Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.normal();
  return out;
}

inline std::vector<double> cumsum(const std::vector<double>& e) {
  std::vector<double> out(e.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = acc += e[i];
  return out;
}

}  // namespace testing_support
