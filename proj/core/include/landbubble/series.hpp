#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landbubble/time_series.hpp"

namespace landbubble::series {

/// Type-7 empirical quantile (linear interpolation between order statistics)
/// of an already sorted sample.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);
[[nodiscard]] double quantile(std::span<const double> values, double q);

/// Clamps every value into the [lo_q, hi_q] empirical quantile band.
///
/// The band edges are the order statistics x_(ceil((n-1)*lo_q)) and
/// x_(floor((n-1)*hi_q)), i.e. the nearest observed values on the inner side
/// of the type-7 quantiles. Using observed values keeps the operation
/// idempotent. Order and length are preserved.
[[nodiscard]] std::vector<double> winsorize(std::span<const double> values, double lo_q,
                                            double hi_q);

enum class ResampleRule { last, mean };

struct ResampleResult {
  TimeSeries series;
  /// Set when the input was already weekly and was returned unchanged.
  bool already_weekly = false;
};

/// Daily -> weekly on ISO (Monday-Sunday) buckets. Each output point is dated
/// on the Monday of its week; weeks without observations are omitted.
[[nodiscard]] ResampleResult resample(const TimeSeries& series, Frequency target,
                                      ResampleRule rule = ResampleRule::last);

enum class DiffMode { log, simple };

/// First differences dated at the later observation. Refuses series with
/// missing periods (GapError) since that would difference across the hole.
[[nodiscard]] TimeSeries difference(const TimeSeries& series, DiffMode mode = DiffMode::log);

/// Fills missing periods by log-linear interpolation between neighbours.
/// Values must be strictly positive.
[[nodiscard]] TimeSeries fill_gaps_log_linear(const TimeSeries& series);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  /// Sample standard deviation (n - 1 denominator); undefined for n = 1.
  std::optional<double> std_dev;
  /// m3 / m2^(3/2); undefined for n < 2 or zero variance.
  std::optional<double> skewness;
  /// m4 / m2^2, non-excess (normal ~ 3); undefined for n < 2 or zero variance.
  std::optional<double> kurtosis;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

[[nodiscard]] SummaryStats summary_stats(std::span<const double> values);

/// Pearson correlation; undefined for fewer than 3 pairs or a zero-variance side.
[[nodiscard]] std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CorrelogramEntry {
  int offset = 0;
  std::optional<double> corr;
  std::size_t n_pairs = 0;
};

struct Correlogram {
  int max_lag = 0;
  /// Offsets -max_lag..max_lag in increasing order.
  std::vector<CorrelogramEntry> entries;

  [[nodiscard]] const CorrelogramEntry& at(int offset) const;
  /// Offset with the largest defined correlation.
  [[nodiscard]] std::optional<int> argmax() const;
};

/// Entry k is corr(x[d - k*step], y[d]) over all dates d of y for which the
/// shifted x observation exists. Positive k: x lagged by k periods (x leads y);
/// negative k: x led. Pairs are matched by calendar date, so missing periods
/// never misalign the shift.
[[nodiscard]] Correlogram lead_lag_correlation(const TimeSeries& x, const TimeSeries& y,
                                               int max_lag);

struct CorrelationMatrix {
  std::vector<std::string> names;
  /// Row-major, names.size() squared.
  std::vector<std::optional<double>> values;

  [[nodiscard]] const std::optional<double>& operator()(std::size_t i, std::size_t j) const {
    return values[i * names.size() + j];
  }
};

/// Correlations on each pair's date overlap. Diagonal is exactly 1.
[[nodiscard]] CorrelationMatrix pairwise_correlation(std::span<const TimeSeries> series_list);

}  // namespace landbubble::series
