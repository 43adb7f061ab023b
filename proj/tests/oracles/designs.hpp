#pragma once

// Explicitly materialized regression designs, solved with oracle::ols.
// Library types appear only as plain data containers.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "landbubble/transaction.hpp"
#include "oracles.hpp"

namespace oracle {

struct DummyHpi {
  std::vector<long> periods;  // ISO Monday (or day) labels, days since epoch
  std::vector<Real> delta;    // base first, 0
  std::vector<Real> delta_se;
  Real beta_plots = 0, beta_weth = 0;
  Real se_plots = 0, se_weth = 0;
  Real rss = 0;
  std::size_t df = 0;
};

// ln(price) on [1, D_2..D_P, ln(plots), weth] over periods with at least
// `min_per_period` sales.
inline DummyHpi dummy_hpi(const std::vector<landbubble::Transaction>& txs, bool weekly,
                          std::size_t min_per_period, bool plots = true, bool weth = true) {
  std::map<long, std::vector<const landbubble::Transaction*>> buckets;
  for (const auto& tx : txs) {
    const long d = tx.date.days_since_epoch();
    buckets[weekly ? iso_monday(d) : d].push_back(&tx);
  }
  DummyHpi out;
  for (const auto& [p, list] : buckets) {
    if (list.size() >= min_per_period) out.periods.push_back(p);
  }
  const std::size_t P = out.periods.size();
  Matrix x;
  std::vector<Real> y;
  for (std::size_t pi = 0; pi < P; ++pi) {
    for (const auto* tx : buckets[out.periods[pi]]) {
      std::vector<Real> row(P, 0);
      row[0] = 1;
      if (pi > 0) row[pi] = 1;
      if (plots) row.push_back(std::log(static_cast<Real>(tx->num_plots)));
      if (weth) row.push_back(tx->paid_in_weth ? 1 : 0);
      x.push_back(row);
      y.push_back(std::log(static_cast<Real>(tx->usd_price)));
    }
  }
  const auto fit = ols(x, y);
  out.delta.push_back(0);
  out.delta_se.push_back(0);
  for (std::size_t pi = 1; pi < P; ++pi) {
    out.delta.push_back(fit.beta[pi]);
    out.delta_se.push_back(fit.se[pi]);
  }
  std::size_t c = P;
  if (plots) {
    out.beta_plots = fit.beta[c];
    out.se_plots = fit.se[c++];
  }
  if (weth) {
    out.beta_weth = fit.beta[c];
    out.se_weth = fit.se[c];
  }
  out.rss = fit.rss;
  out.df = fit.df;
  return out;
}

// Equation `eq` of a VAR(p): data(t, eq) on [1, data(t-1, .), ..., data(t-p, .)]
// for t = p..rows-1, optionally without the lags of column `drop`.
inline Ols var_equation(const Eigen::MatrixXd& data, std::size_t p, Eigen::Index eq,
                        Eigen::Index drop = -1) {
  Matrix x;
  std::vector<Real> y;
  for (Eigen::Index t = static_cast<Eigen::Index>(p); t < data.rows(); ++t) {
    std::vector<Real> row{1};
    for (std::size_t l = 1; l <= p; ++l) {
      for (Eigen::Index c = 0; c < data.cols(); ++c) {
        if (c != drop) row.push_back(data(t - static_cast<Eigen::Index>(l), c));
      }
    }
    x.push_back(row);
    y.push_back(data(t, eq));
  }
  return ols(x, y);
}

}  // namespace oracle
