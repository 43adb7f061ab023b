#include "landbubble/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "landbubble/error.hpp"

namespace landbubble::series {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + ": non-finite value at position " +
                            std::to_string(i));
    }
  }
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

std::vector<double> winsorize(std::span<const double> values, double lo_q, double hi_q) {
  if (values.empty()) throw ValidationError("winsorize: empty input");
  if (!(lo_q >= 0.0 && lo_q < hi_q && hi_q <= 1.0)) {
    throw ValidationError("winsorize: need 0 <= lo_q < hi_q <= 1");
  }
  require_finite(values, "winsorize");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double span = static_cast<double>(sorted.size() - 1);
  // The small epsilon keeps e.g. 999 * 0.001 from being rounded past an integer.
  const auto lo_idx = static_cast<std::size_t>(std::ceil(span * lo_q - 1e-9));
  const auto hi_idx = static_cast<std::size_t>(std::floor(span * hi_q + 1e-9));
  const double lo = sorted[std::min(lo_idx, sorted.size() - 1)];
  const double hi = sorted[std::max(std::min(hi_idx, sorted.size() - 1), lo_idx)];

  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v = std::clamp(v, lo, hi);
  return out;
}

ResampleResult resample(const TimeSeries& series, Frequency target, ResampleRule rule) {
  if (series.empty()) throw ValidationError("resample: empty series '" + series.name() + "'");
  if (target != Frequency::weekly) {
    throw ValidationError("resample: only daily -> weekly aggregation is supported");
  }
  if (series.freq() == Frequency::weekly) return {series, true};

  std::vector<Date> dates;
  std::vector<double> values;
  const auto raw_dates = series.dates();
  const auto raw_values = series.values();
  std::size_t i = 0;
  while (i < raw_dates.size()) {
    const Date week = raw_dates[i].iso_week_start();
    double sum = 0.0;
    std::size_t count = 0;
    double last = 0.0;
    while (i < raw_dates.size() && raw_dates[i].iso_week_start() == week) {
      sum += raw_values[i];
      last = raw_values[i];
      ++count;
      ++i;
    }
    dates.push_back(week);
    values.push_back(rule == ResampleRule::last ? last : sum / static_cast<double>(count));
  }
  return {TimeSeries(series.name(), Frequency::weekly, std::move(dates), std::move(values)), false};
}

TimeSeries difference(const TimeSeries& series, DiffMode mode) {
  if (series.size() < 2) {
    throw InsufficientDataError("difference: series '" + series.name() +
                                "' needs at least 2 observations");
  }
  if (series.has_gaps()) {
    const auto missing = series.missing_dates();
    throw GapError("difference: series '" + series.name() + "' has " +
                   std::to_string(missing.size()) + " missing period(s), first at " +
                   missing.front().to_string() +
                   "; refusing to difference across gaps (use a fill policy)");
  }
  const auto v = series.values();
  if (mode == DiffMode::log) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) {
        throw DomainError("difference: log mode needs positive values; series '" +
                          series.name() + "' has " + std::to_string(v[i]) + " on " +
                          series.date(i).to_string());
      }
    }
  }
  std::vector<Date> dates(series.dates().begin() + 1, series.dates().end());
  std::vector<double> out(v.size() - 1);
  for (std::size_t i = 1; i < v.size(); ++i) {
    out[i - 1] = mode == DiffMode::log ? std::log(v[i]) - std::log(v[i - 1]) : v[i] - v[i - 1];
  }
  return TimeSeries(series.name(), series.freq(), std::move(dates), std::move(out));
}

TimeSeries fill_gaps_log_linear(const TimeSeries& series) {
  const auto v = series.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw DomainError("fill: log-linear interpolation needs positive values; series '" +
                        series.name() + "' has " + std::to_string(v[i]) + " on " +
                        series.date(i).to_string());
    }
  }
  const std::int32_t step = step_days(series.freq());
  std::vector<Date> dates;
  std::vector<double> values;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0) {
      const Date a = series.date(i - 1);
      const Date b = series.date(i);
      const double la = std::log(v[i - 1]);
      const double lb = std::log(v[i]);
      const double width = static_cast<double>(b - a);
      for (Date d = a + step; d < b; d = d + step) {
        const double w = static_cast<double>(d - a) / width;
        dates.push_back(d);
        values.push_back(std::exp(la + w * (lb - la)));
      }
    }
    dates.push_back(series.date(i));
    values.push_back(v[i]);
  }
  return TimeSeries(series.name(), series.freq(), std::move(dates), std::move(values));
}

SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw ValidationError("summary_stats: empty input");
  require_finite(values, "summary_stats");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Summing the sorted sample makes the result independent of input order.
  double sum = 0.0;
  for (double v : sorted) sum += v;

  SummaryStats s;
  s.n = sorted.size();
  const double n = static_cast<double>(s.n);
  s.mean = sum / n;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = quantile_sorted(sorted, 0.5);
  s.p50 = s.median;
  s.p5 = quantile_sorted(sorted, 0.05);
  s.p95 = quantile_sorted(sorted, 0.95);

  if (s.n < 2) return s;
  if (s.min == s.max) {
    s.std_dev = 0.0;
    return s;
  }
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sorted) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  s.std_dev = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2);
  return s;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const CorrelogramEntry& Correlogram::at(int offset) const {
  if (offset < -max_lag || offset > max_lag) {
    throw ValidationError("correlogram offset " + std::to_string(offset) + " out of range");
  }
  return entries.at(static_cast<std::size_t>(offset + max_lag));
}

std::optional<int> Correlogram::argmax() const {
  std::optional<int> best;
  double best_corr = 0.0;
  for (const auto& e : entries) {
    if (e.corr && (!best || *e.corr > best_corr)) {
      best = e.offset;
      best_corr = *e.corr;
    }
  }
  return best;
}

Correlogram lead_lag_correlation(const TimeSeries& x, const TimeSeries& y, int max_lag) {
  if (x.freq() != y.freq()) {
    throw ValidationError("lead_lag_correlation: '" + x.name() + "' and '" + y.name() +
                          "' have different frequencies");
  }
  if (max_lag < 0) throw ValidationError("lead_lag_correlation: negative max_lag");
  const std::int32_t step = step_days(x.freq());

  Correlogram out;
  out.max_lag = max_lag;
  std::vector<double> xs, ys;
  for (int k = -max_lag; k <= max_lag; ++k) {
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (auto j = x.find(y.date(i) - k * step)) {
        xs.push_back(x.value(*j));
        ys.push_back(y.value(i));
      }
    }
    out.entries.push_back({k, pearson(xs, ys), xs.size()});
  }
  return out;
}

CorrelationMatrix pairwise_correlation(std::span<const TimeSeries> series_list) {
  if (series_list.size() < 2) throw ValidationError("pairwise_correlation: need at least 2 series");
  const std::size_t k = series_list.size();
  CorrelationMatrix m;
  m.values.assign(k * k, std::nullopt);
  for (const auto& s : series_list) m.names.push_back(s.name());

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < k; ++i) {
    m.values[i * k + i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      xs.clear();
      ys.clear();
      const auto& a = series_list[i];
      const auto& b = series_list[j];
      for (std::size_t t = 0; t < a.size(); ++t) {
        if (auto u = b.find(a.date(t))) {
          xs.push_back(a.value(t));
          ys.push_back(b.value(*u));
        }
      }
      const auto r = pearson(xs, ys);
      m.values[i * k + j] = r;
      m.values[j * k + i] = r;
    }
  }
  return m;
}

}  // namespace landbubble::series
