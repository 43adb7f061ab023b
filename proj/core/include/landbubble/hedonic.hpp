#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landbubble/time_series.hpp"
#include "landbubble/transaction.hpp"

namespace landbubble::hedonic {

/// Period label -> transactions. Weekly periods are labelled by the Monday of
/// their ISO week, daily periods by the calendar day.
using PeriodBuckets = std::map<Date, std::vector<Transaction>>;

[[nodiscard]] Date period_of(Date date, Frequency freq) noexcept;
[[nodiscard]] PeriodBuckets bucket_periods(std::span<const Transaction> transactions,
                                           Frequency freq);

struct HpiPoint {
  Date period;
  /// exp(delta); exactly 1 for the base period.
  double index = 1.0;
  /// Period fixed effect relative to the base period.
  double delta = 0.0;
  /// Standard error of delta (0 for the base period).
  double std_error = 0.0;
  std::size_t n_transactions = 0;
};

/// A period with too few sales to estimate.
struct GapPeriod {
  Date period;
  std::size_t n_transactions = 0;
};

struct ControlEstimate {
  /// False when the control has no variation within any period; it is then
  /// absorbed by the period effects and left out of the regression.
  bool identified = false;
  double coefficient = 0.0;
  double std_error = 0.0;
};

struct HedonicFit {
  ControlEstimate log_num_plots;
  ControlEstimate weth_flag;
  std::size_t n_obs = 0;
  std::size_t n_periods = 0;
  double rss = 0.0;
  std::size_t df_resid = 0;
  double sigma2 = 0.0;
};

struct HedonicOptions {
  std::size_t min_per_period = 3;
  bool control_log_plots = true;
  bool control_weth = true;
};

struct HpiResult {
  Frequency freq = Frequency::weekly;
  /// Estimated periods only, sorted; the first is the base period.
  std::vector<HpiPoint> points;
  std::vector<GapPeriod> gaps;
  HedonicFit fit;
};

/// Time-dummy hedonic index: ln(usd_price) on period effects (first estimable
/// period as base), ln(num_plots) and the wETH indicator.
///
/// The period effects are absorbed (within-period demeaning), so the cost is
/// linear in the number of transactions; the estimates are those of the
/// explicit dummy regression.
[[nodiscard]] HpiResult build_hpi(std::span<const Transaction> transactions, Frequency freq,
                                  const HedonicOptions& options = {});

/// Index levels as a series. Gap periods are simply absent.
[[nodiscard]] TimeSeries hpi_to_series(std::span<const HpiPoint> points, Frequency freq,
                                       std::string name = "HPI");
[[nodiscard]] TimeSeries hpi_to_series(const HpiResult& result, std::string name = "HPI");

}  // namespace landbubble::hedonic
