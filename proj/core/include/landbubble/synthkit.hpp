#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "landbubble/time_series.hpp"
#include "landbubble/transaction.hpp"

namespace landbubble::synth {

/// Dating of generated series. Generators are pure functions of their
/// parameters and the seed; all randomness comes from landbubble::Rng.
struct Layout {
  Date start{2021, 1, 4};
  Frequency freq = Frequency::daily;
  std::string name = "y";
};

/// y_0 = 0, y_t = y_{t-1} + drift + sigma * e_t.
[[nodiscard]] TimeSeries gen_random_walk(std::size_t T, double drift, double sigma,
                                         std::uint64_t seed, const Layout& layout = {});

/// Half-open index range [start, end).
struct Window {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

struct ExplosiveSeries {
  TimeSeries series;
  std::vector<Window> windows;
  /// Truth label for every observation.
  std::vector<bool> in_bubble;
};

/// Driftless random walk from `initial`, switching to y_t = rho * y_{t-1} +
/// sigma * e_t inside the windows. With no windows and initial = 0 the path
/// equals gen_random_walk(T, 0, sigma, seed).
[[nodiscard]] ExplosiveSeries gen_explosive(std::size_t T, std::span<const Window> windows,
                                            double rho, double sigma, std::uint64_t seed,
                                            double initial = 0.0, const Layout& layout = {});

struct CoupledPair {
  TimeSeries x;
  TimeSeries y;
  /// Truth: x Granger-causes y at this lag with this loading.
  double beta = 0.0;
  std::size_t lag = 1;
};

/// x_t i.i.d. N(0, 1); y_t = beta * x_{t-lag} + noise * eta_t. The first
/// `lag` values of y use presample draws of x, so every y_t follows the model.
[[nodiscard]] CoupledPair gen_coupled_pair(std::size_t T, double beta, std::size_t lag,
                                           double noise, std::uint64_t seed,
                                           const Layout& layout = {});

struct HedonicPanelOptions {
  double intercept = 7.0;
  /// First period label; weekly periods should start on a Monday.
  Date start{2021, 1, 4};
  Frequency freq = Frequency::weekly;
  double weth_probability = 0.3;
  int max_plots = 9;
};

struct HedonicPanel {
  std::vector<Transaction> transactions;
  std::vector<Date> periods;
  std::vector<double> deltas;
  double intercept = 0.0;
  double beta_plots = 0.0;
  double beta_weth = 0.0;
  double noise = 0.0;
};

/// ln(price) = intercept + delta_p + beta_plots * ln(plots) + beta_weth * weth
/// + noise * e, plots uniform on 1..max_plots, weth ~ Bernoulli. Prices are
/// quoted in USD (native currency "USD").
[[nodiscard]] HedonicPanel gen_hedonic_panel(std::span<const double> deltas,
                                             std::size_t n_per_period, double beta_plots,
                                             double beta_weth, double noise, std::uint64_t seed,
                                             const HedonicPanelOptions& options = {});

struct Quote {
  Date date;
  std::string symbol;
  double usd_price = 0.0;
};

/// Truth labels of the market dataset.
struct MarketTruth {
  /// Explosive stretch of the MANA daily price (indices into the daily grid).
  Window mana_bubble;
  Date bubble_start;
  Date bubble_end;
  /// Weekly log HPI loads on the previous week's log MANA level.
  double hpi_loading = 0.0;
  std::size_t hpi_lag_weeks = 1;
  std::size_t n_outliers = 0;
  std::size_t n_malformed = 0;
};

struct MarketDataset {
  /// Transactions file lines (header first) in the ingest schema, including a
  /// few deliberately malformed rows.
  std::vector<std::string> transaction_lines;
  std::vector<Quote> quotes;
  MarketTruth truth;

  [[nodiscard]] std::string transactions_csv() const;
};

struct MarketOptions {
  Date start{2021, 1, 4};
  std::size_t n_weeks = 84;
  std::size_t min_per_week = 6;
  std::size_t max_per_week = 20;
};

/// Daily BTC, ETH and MANA quotes with a planted MANA bubble, plus LAND sales
/// whose hedonic index tracks lagged MANA.
[[nodiscard]] MarketDataset gen_market_dataset(std::uint64_t seed, const MarketOptions& options = {});

}  // namespace landbubble::synth
