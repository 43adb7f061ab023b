#include "landbubble/synthkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "landbubble/csv.hpp"
#include "landbubble/error.hpp"
#include "landbubble/rng.hpp"

namespace landbubble::synth {

namespace {

void require_length(std::size_t T) {
  if (T < 10) throw ValidationError("synth: T = " + std::to_string(T) + " is below 10");
}

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("synth: sigma must be >= 0");
}

std::vector<Date> grid(std::size_t T, const Layout& layout) {
  std::vector<Date> dates(T);
  for (std::size_t t = 0; t < T; ++t) {
    dates[t] = layout.start + static_cast<std::int32_t>(t) * step_days(layout.freq);
  }
  return dates;
}

}  // namespace

TimeSeries gen_random_walk(std::size_t T, double drift, double sigma, std::uint64_t seed,
                           const Layout& layout) {
  require_length(T);
  require_sigma(sigma);
  Rng rng(seed);
  std::vector<double> y(T, 0.0);
  for (std::size_t t = 1; t < T; ++t) y[t] = y[t - 1] + drift + sigma * rng.normal();
  return TimeSeries(layout.name, layout.freq, grid(T, layout), std::move(y));
}

ExplosiveSeries gen_explosive(std::size_t T, std::span<const Window> windows, double rho,
                              double sigma, std::uint64_t seed, double initial,
                              const Layout& layout) {
  require_length(T);
  require_sigma(sigma);
  if (!(rho > 1.0) || !std::isfinite(rho)) throw ValidationError("gen_explosive: rho must exceed 1");
  std::vector<Window> sorted(windows.begin(), windows.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Window& a, const Window& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& w = sorted[i];
    if (w.start >= w.end || w.end > T) {
      throw ValidationError("gen_explosive: window [" + std::to_string(w.start) + ", " +
                            std::to_string(w.end) + ") is empty or outside [0, " +
                            std::to_string(T) + ")");
    }
    if (i > 0 && sorted[i - 1].end > w.start) {
      throw ValidationError("gen_explosive: windows [" + std::to_string(sorted[i - 1].start) +
                            ", " + std::to_string(sorted[i - 1].end) + ") and [" +
                            std::to_string(w.start) + ", " + std::to_string(w.end) +
                            ") overlap");
    }
  }

  ExplosiveSeries out;
  out.windows = sorted;
  out.in_bubble.assign(T, false);
  for (const auto& w : sorted) {
    std::fill(out.in_bubble.begin() + static_cast<std::ptrdiff_t>(w.start),
              out.in_bubble.begin() + static_cast<std::ptrdiff_t>(w.end), true);
  }
  Rng rng(seed);
  std::vector<double> y(T);
  y[0] = initial;
  for (std::size_t t = 1; t < T; ++t) {
    const double e = sigma * rng.normal();
    y[t] = (out.in_bubble[t] ? rho * y[t - 1] : y[t - 1]) + e;
  }
  out.series = TimeSeries(layout.name, layout.freq, grid(T, layout), std::move(y));
  return out;
}

CoupledPair gen_coupled_pair(std::size_t T, double beta, std::size_t lag, double noise,
                             std::uint64_t seed, const Layout& layout) {
  require_length(T);
  require_sigma(noise);
  if (lag < 1) throw ValidationError("gen_coupled_pair: lag must be at least 1");
  Rng x_rng(derive_seed(seed, 0));
  Rng eta_rng(derive_seed(seed, 1));
  // x_full[j] holds x_{j - lag}.
  std::vector<double> x_full(T + lag);
  for (auto& v : x_full) v = x_rng.normal();
  std::vector<double> x(x_full.begin() + static_cast<std::ptrdiff_t>(lag), x_full.end());
  std::vector<double> y(T);
  for (std::size_t t = 0; t < T; ++t) y[t] = beta * x_full[t] + noise * eta_rng.normal();

  const auto dates = grid(T, layout);
  CoupledPair out;
  out.x = TimeSeries("x", layout.freq, dates, std::move(x));
  out.y = TimeSeries("y", layout.freq, dates, std::move(y));
  out.beta = beta;
  out.lag = lag;
  return out;
}

HedonicPanel gen_hedonic_panel(std::span<const double> deltas, std::size_t n_per_period,
                               double beta_plots, double beta_weth, double noise,
                               std::uint64_t seed, const HedonicPanelOptions& options) {
  if (deltas.size() < 2) throw ValidationError("gen_hedonic_panel: need at least 2 periods");
  if (n_per_period < 3) throw ValidationError("gen_hedonic_panel: need at least 3 sales per period");
  require_sigma(noise);
  if (options.max_plots < 1) throw ValidationError("gen_hedonic_panel: max_plots must be >= 1");

  HedonicPanel out;
  out.deltas.assign(deltas.begin(), deltas.end());
  out.intercept = options.intercept;
  out.beta_plots = beta_plots;
  out.beta_weth = beta_weth;
  out.noise = noise;
  Rng rng(seed);
  const std::int32_t step = step_days(options.freq);
  for (std::size_t p = 0; p < deltas.size(); ++p) {
    const Date period = options.start + static_cast<std::int32_t>(p) * step;
    out.periods.push_back(period);
    for (std::size_t i = 0; i < n_per_period; ++i) {
      Transaction tx;
      tx.date = period + static_cast<std::int32_t>(rng.uniform_int(0, step - 1));
      tx.num_plots = static_cast<int>(rng.uniform_int(1, options.max_plots));
      tx.paid_in_weth = rng.bernoulli(options.weth_probability);
      const double log_price = options.intercept + deltas[p] +
                               beta_plots * std::log(static_cast<double>(tx.num_plots)) +
                               (tx.paid_in_weth ? beta_weth : 0.0) + noise * rng.normal();
      tx.usd_price = std::exp(log_price);
      tx.native_currency = "USD";
      tx.native_price = tx.usd_price;
      tx.tx_id = "p" + std::to_string(p) + "-" + std::to_string(i);
      out.transactions.push_back(std::move(tx));
    }
  }
  return out;
}

std::string MarketDataset::transactions_csv() const {
  std::string out;
  for (const auto& line : transaction_lines) {
    out += line;
    out += '\n';
  }
  return out;
}

namespace {

std::string timestamp(Date date, Rng& rng) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(rng.uniform_int(0, 23)),
                static_cast<int>(rng.uniform_int(0, 59)), static_cast<int>(rng.uniform_int(0, 59)));
  return date.to_string() + buf;
}

std::string tx_hash(Rng& rng) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(rng.next_u64()));
  return buf;
}

}  // namespace

MarketDataset gen_market_dataset(std::uint64_t seed, const MarketOptions& options) {
  if (options.n_weeks < 30) throw ValidationError("gen_market_dataset: need at least 30 weeks");
  if (options.min_per_week < 3 || options.max_per_week < options.min_per_week) {
    throw ValidationError("gen_market_dataset: invalid per-week sales range");
  }
  const std::size_t days = options.n_weeks * 7;
  Rng market(derive_seed(seed, 0));
  Rng sales(derive_seed(seed, 1));

  // Daily log prices. MANA runs up for 45 days starting at 55% of the sample,
  // then gives most of it back over 20 days.
  MarketDataset out;
  auto& truth = out.truth;
  truth.mana_bubble = {days * 55 / 100, days * 55 / 100 + 45};
  truth.bubble_start = options.start + static_cast<std::int32_t>(truth.mana_bubble.start);
  truth.bubble_end = options.start + static_cast<std::int32_t>(truth.mana_bubble.end - 1);
  truth.hpi_loading = 0.9;
  truth.hpi_lag_weeks = 1;
  const std::size_t crash_end = std::min(days, truth.mana_bubble.end + 20);

  std::vector<double> log_btc(days), log_eth(days), log_mana(days);
  log_btc[0] = std::log(30000.0);
  log_eth[0] = std::log(1000.0);
  log_mana[0] = std::log(0.15);
  for (std::size_t t = 1; t < days; ++t) {
    const double common = 0.035 * market.normal();
    log_btc[t] = log_btc[t - 1] + 0.0008 + common;
    log_eth[t] = log_eth[t - 1] + 0.001 + 1.1 * common + 0.02 * market.normal();
    double drift = 0.0;
    if (t >= truth.mana_bubble.start && t < truth.mana_bubble.end) {
      drift = 0.045;
    } else if (t >= truth.mana_bubble.end && t < crash_end) {
      drift = -0.06;
    }
    log_mana[t] = log_mana[t - 1] + drift + 0.5 * common + 0.03 * market.normal();
  }
  for (std::size_t t = 0; t < days; ++t) {
    const Date d = options.start + static_cast<std::int32_t>(t);
    out.quotes.push_back({d, "BTC", std::exp(log_btc[t])});
    out.quotes.push_back({d, "ETH", std::exp(log_eth[t])});
    out.quotes.push_back({d, "MANA", std::exp(log_mana[t])});
  }

  auto& lines = out.transaction_lines;
  lines.emplace_back("timestamp,native_price,currency,num_plots,tx_id");
  const std::size_t n_weeks = options.n_weeks;
  const std::size_t outlier_weeks[2] = {n_weeks / 3, 2 * n_weeks / 3};
  for (std::size_t w = 0; w < n_weeks; ++w) {
    // Previous week's closing MANA (the first week uses the opening price).
    const double lead = w == 0 ? log_mana[0] : log_mana[7 * w - 1];
    const double level = truth.hpi_loading * (lead - log_mana[0]) + 0.04 * sales.normal();
    const auto n = static_cast<std::size_t>(
        sales.uniform_int(static_cast<std::int64_t>(options.min_per_week),
                          static_cast<std::int64_t>(options.max_per_week)));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t day = 7 * w + static_cast<std::size_t>(sales.uniform_int(0, 6));
      const Date date = options.start + static_cast<std::int32_t>(day);
      const int plots = sales.bernoulli(0.7) ? 1 : static_cast<int>(sales.uniform_int(2, 9));
      const bool weth = sales.bernoulli(0.3);
      double log_usd = 8.0 + level + 0.9 * std::log(static_cast<double>(plots)) -
                       (weth ? 0.1 : 0.0) + 0.3 * sales.normal();
      if (i == 0 && (w == outlier_weeks[0] || w == outlier_weeks[1])) {
        log_usd += std::log(1e4);
        ++truth.n_outliers;
      }
      std::string currency;
      double quote = 1.0;
      if (weth) {
        currency = "WETH";
        quote = std::exp(log_eth[day]);
      } else {
        const double u = sales.uniform();
        if (u < 0.6) {
          currency = "ETH";
          quote = std::exp(log_eth[day]);
        } else if (u < 0.95) {
          currency = "MANA";
          quote = std::exp(log_mana[day]);
        } else {
          currency = "USDC";
        }
      }
      lines.push_back(timestamp(date, sales) + "," + csv::format_double(std::exp(log_usd) / quote) +
                      "," + currency + "," + std::to_string(plots) + "," + tx_hash(sales));
    }
    // Rows that ingest must reject, spread through the file.
    if (w == 5) {
      lines.push_back(timestamp(options.start + 37, sales) + ",1.5,ETH,0," + tx_hash(sales));
      ++truth.n_malformed;
    } else if (w == 20) {
      lines.push_back("2021-13-45T00:00:00Z,2.0,ETH,1," + tx_hash(sales));
      ++truth.n_malformed;
    } else if (w == 40) {
      lines.push_back(timestamp(options.start + 283, sales) + ",120,APE,1," + tx_hash(sales));
      ++truth.n_malformed;
    } else if (w == 60) {
      lines.push_back(timestamp(options.start + 424, sales) + ",-3,ETH,2," + tx_hash(sales));
      ++truth.n_malformed;
    }
  }
  return out;
}

}  // namespace landbubble::synth
