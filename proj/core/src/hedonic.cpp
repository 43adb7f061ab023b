#include "landbubble/hedonic.hpp"

#include <cmath>

#include "landbubble/error.hpp"
#include "landbubble/linreg.hpp"

namespace landbubble::hedonic {

Date period_of(Date date, Frequency freq) noexcept {
  return freq == Frequency::weekly ? date.iso_week_start() : date;
}

PeriodBuckets bucket_periods(std::span<const Transaction> transactions, Frequency freq) {
  PeriodBuckets buckets;
  for (const auto& tx : transactions) buckets[period_of(tx.date, freq)].push_back(tx);
  return buckets;
}

namespace {

struct Control {
  std::string label;
  ControlEstimate* estimate;
  double (*value)(const Transaction&);
};

double log_plots(const Transaction& tx) { return std::log(static_cast<double>(tx.num_plots)); }
double weth(const Transaction& tx) { return tx.paid_in_weth ? 1.0 : 0.0; }

bool varies_within_some_period(const std::vector<const std::vector<Transaction>*>& periods,
                               double (*value)(const Transaction&)) {
  for (const auto* txs : periods) {
    const double first = value(txs->front());
    for (const auto& tx : *txs) {
      if (value(tx) != first) return true;
    }
  }
  return false;
}

}  // namespace

HpiResult build_hpi(std::span<const Transaction> transactions, Frequency freq,
                    const HedonicOptions& options) {
  for (const auto& tx : transactions) {
    if (!(tx.usd_price > 0.0) || !std::isfinite(tx.usd_price)) {
      throw ValidationError("build_hpi: non-positive USD price on " + tx.date.to_string());
    }
    if (tx.num_plots < 1) {
      throw ValidationError("build_hpi: plot count < 1 on " + tx.date.to_string());
    }
  }

  HpiResult result;
  result.freq = freq;
  const auto buckets = bucket_periods(transactions, freq);
  std::vector<Date> labels;
  std::vector<const std::vector<Transaction>*> periods;
  for (const auto& [period, txs] : buckets) {
    if (txs.size() < options.min_per_period) {
      result.gaps.push_back({period, txs.size()});
    } else {
      labels.push_back(period);
      periods.push_back(&txs);
    }
  }
  if (periods.size() < 2) {
    throw InsufficientDataError("build_hpi: " + std::to_string(periods.size()) +
                                " period(s) with at least " +
                                std::to_string(options.min_per_period) +
                                " transactions; need 2 to build an index");
  }

  std::vector<Control> controls;
  if (options.control_log_plots) {
    controls.push_back({"log_num_plots", &result.fit.log_num_plots, &log_plots});
  }
  if (options.control_weth) controls.push_back({"weth_flag", &result.fit.weth_flag, &weth});
  std::erase_if(controls, [&](const Control& c) { return !varies_within_some_period(periods, c.value); });

  const std::size_t n_periods = periods.size();
  const auto kc = static_cast<Eigen::Index>(controls.size());
  std::size_t n = 0;
  for (const auto* txs : periods) n += txs->size();
  const std::size_t n_params = n_periods + controls.size();
  if (n <= n_params) {
    throw InsufficientDataError("build_hpi: " + std::to_string(n) + " transactions for " +
                                std::to_string(n_params) + " parameters");
  }

  // Within-period means of the response and controls.
  Eigen::VectorXd y_mean(static_cast<Eigen::Index>(n_periods));
  Eigen::MatrixXd x_mean(static_cast<Eigen::Index>(n_periods), kc);
  Eigen::VectorXd y_dm(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd x_dm(static_cast<Eigen::Index>(n), kc);
  Eigen::Index row = 0;
  for (std::size_t p = 0; p < n_periods; ++p) {
    const auto& txs = *periods[p];
    const auto pi = static_cast<Eigen::Index>(p);
    const double count = static_cast<double>(txs.size());
    double sy = 0.0;
    for (const auto& tx : txs) sy += std::log(tx.usd_price);
    y_mean[pi] = sy / count;
    for (Eigen::Index c = 0; c < kc; ++c) {
      double sx = 0.0;
      for (const auto& tx : txs) sx += controls[static_cast<std::size_t>(c)].value(tx);
      x_mean(pi, c) = sx / count;
    }
    for (const auto& tx : txs) {
      y_dm[row] = std::log(tx.usd_price) - y_mean[pi];
      for (Eigen::Index c = 0; c < kc; ++c) {
        x_dm(row, c) = controls[static_cast<std::size_t>(c)].value(tx) - x_mean(pi, c);
      }
      ++row;
    }
  }

  auto& fit = result.fit;
  fit.n_obs = n;
  fit.n_periods = n_periods;
  fit.df_resid = n - n_params;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(kc);
  Eigen::MatrixXd beta_cov = Eigen::MatrixXd::Zero(kc, kc);
  if (kc > 0) {
    std::vector<std::string> names;
    for (const auto& c : controls) names.push_back(c.label);
    const auto ols = linreg::ols_fit(linreg::DesignMatrix(x_dm, names), y_dm);
    beta = ols.coefficients;
    fit.rss = ols.rss;
    fit.sigma2 = fit.rss / static_cast<double>(fit.df_resid);
    beta_cov = fit.sigma2 * ols.xtx_inverse;
    for (Eigen::Index c = 0; c < kc; ++c) {
      auto* est = controls[static_cast<std::size_t>(c)].estimate;
      est->identified = true;
      est->coefficient = beta[c];
      est->std_error = std::sqrt(beta_cov(c, c));
    }
  } else {
    fit.rss = y_dm.squaredNorm();
    fit.sigma2 = fit.rss / static_cast<double>(fit.df_resid);
  }

  // Period effect a_p = mean(y_p) - beta' mean(x_p); delta_p = a_p - a_base.
  const Eigen::VectorXd effects = y_mean - x_mean * beta;
  const double n_base = static_cast<double>(periods.front()->size());
  result.points.reserve(n_periods);
  for (std::size_t p = 0; p < n_periods; ++p) {
    const auto pi = static_cast<Eigen::Index>(p);
    HpiPoint point;
    point.period = labels[p];
    point.n_transactions = periods[p]->size();
    if (p == 0) {
      point.delta = 0.0;
      point.index = 1.0;
      point.std_error = 0.0;
    } else {
      point.delta = effects[pi] - effects[0];
      point.index = std::exp(point.delta);
      const Eigen::VectorXd d = (x_mean.row(pi) - x_mean.row(0)).transpose();
      const double var = fit.sigma2 * (1.0 / static_cast<double>(point.n_transactions) + 1.0 / n_base) +
                         d.dot(beta_cov * d);
      point.std_error = std::sqrt(var);
    }
    result.points.push_back(point);
  }
  return result;
}

TimeSeries hpi_to_series(std::span<const HpiPoint> points, Frequency freq, std::string name) {
  std::vector<Date> dates;
  std::vector<double> values;
  dates.reserve(points.size());
  values.reserve(points.size());
  for (const auto& p : points) {
    dates.push_back(p.period);
    values.push_back(p.index);
  }
  return TimeSeries(std::move(name), freq, std::move(dates), std::move(values));
}

TimeSeries hpi_to_series(const HpiResult& result, std::string name) {
  return hpi_to_series(result.points, result.freq, std::move(name));
}

}  // namespace landbubble::hedonic
