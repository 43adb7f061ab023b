#include "landbubble/var_granger.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "landbubble/error.hpp"

namespace landbubble::var {

Panel::Panel(std::vector<std::string> names, Frequency freq, std::vector<Date> dates,
             Eigen::MatrixXd data)
    : names_(std::move(names)), freq_(freq), dates_(std::move(dates)), data_(std::move(data)) {
  if (static_cast<std::size_t>(data_.cols()) != names_.size()) {
    throw ValidationError("panel: " + std::to_string(names_.size()) + " names for " +
                          std::to_string(data_.cols()) + " columns");
  }
  if (static_cast<std::size_t>(data_.rows()) != dates_.size()) {
    throw ValidationError("panel: " + std::to_string(dates_.size()) + " dates for " +
                          std::to_string(data_.rows()) + " rows");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("panel: empty variable name");
    if (!seen.insert(n).second) throw ValidationError("panel: duplicate variable '" + n + "'");
  }
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (!(dates_[i - 1] < dates_[i])) {
      throw ValidationError("panel: dates not strictly increasing at " + dates_[i].to_string());
    }
  }
  if (!data_.allFinite()) throw ValidationError("panel: non-finite cell");
}

Panel Panel::align(std::span<const TimeSeries> series) {
  if (series.empty()) throw ValidationError("panel: no series to align");
  const Frequency freq = series.front().freq();
  std::map<Date, std::size_t> counts;
  for (const auto& s : series) {
    if (s.freq() != freq) {
      throw ValidationError("panel: '" + s.name() + "' is " + std::string(to_string(s.freq())) +
                            ", expected " + std::string(to_string(freq)));
    }
    if (s.has_gaps()) {
      throw GapError("panel: '" + s.name() + "' has missing periods (first missing " +
                     s.missing_dates().front().to_string() + "); fill them before fitting");
    }
    for (Date d : s.dates()) ++counts[d];
  }
  std::vector<Date> dates;
  for (const auto& [d, c] : counts) {
    if (c == series.size()) dates.push_back(d);
  }
  if (dates.empty()) throw InsufficientDataError("panel: series share no dates");
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (dates[i] - dates[i - 1] != step_days(freq)) {
      throw GapError("panel: aligned sample has a hole after " + dates[i - 1].to_string());
    }
  }

  std::vector<std::string> names;
  Eigen::MatrixXd data(static_cast<Eigen::Index>(dates.size()),
                       static_cast<Eigen::Index>(series.size()));
  for (std::size_t c = 0; c < series.size(); ++c) {
    names.push_back(series[c].name());
    for (std::size_t r = 0; r < dates.size(); ++r) {
      data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          series[c].value(*series[c].find(dates[r]));
    }
  }
  return Panel(std::move(names), freq, std::move(dates), std::move(data));
}

bool Panel::contains(const std::string& name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Panel::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("panel: no variable '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

TimeSeries Panel::column(const std::string& name) const {
  const auto c = static_cast<Eigen::Index>(index_of(name));
  std::vector<double> values(rows());
  for (std::size_t r = 0; r < rows(); ++r) values[r] = data_(static_cast<Eigen::Index>(r), c);
  return TimeSeries(name, freq_, dates_, std::move(values));
}

Panel Panel::select(const std::vector<std::string>& names) const {
  Eigen::MatrixXd data(data_.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t c = 0; c < names.size(); ++c) {
    data.col(static_cast<Eigen::Index>(c)) = data_.col(static_cast<Eigen::Index>(index_of(names[c])));
  }
  return Panel(names, freq_, dates_, std::move(data));
}

std::size_t min_rows(std::size_t k, std::size_t p) noexcept {
  return std::max(k * p + 6, k * p + p + 2);
}

namespace {

std::string lag_label(const std::string& name, std::size_t lag) {
  return name + ".L" + std::to_string(lag);
}

void require_rows(const Panel& panel, std::size_t p) {
  if (p < 1) throw ValidationError("var: lag order must be at least 1");
  if (panel.width() < 1) throw ValidationError("var: empty panel");
  const std::size_t need = min_rows(panel.width(), p);
  if (panel.rows() < need) {
    throw InsufficientDataError("var: VAR(" + std::to_string(p) + ") on " +
                                std::to_string(panel.width()) + " variables needs " +
                                std::to_string(need) + " rows, panel has " +
                                std::to_string(panel.rows()));
  }
}

// [1, y_{t-1}', ..., y_{t-p}'] for t = p..rows-1.
linreg::DesignMatrix lagged_design(const Panel& panel, std::size_t p) {
  const std::size_t k = panel.width();
  const auto n = static_cast<Eigen::Index>(panel.rows() - p);
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(1 + k * p));
  std::vector<std::string> labels{"const"};
  x.col(0).setOnes();
  for (std::size_t lag = 1; lag <= p; ++lag) {
    for (std::size_t v = 0; v < k; ++v) {
      const auto col = static_cast<Eigen::Index>(1 + (lag - 1) * k + v);
      x.col(col) = panel.data().col(static_cast<Eigen::Index>(v)).segment(
          static_cast<Eigen::Index>(p - lag), n);
      labels.push_back(lag_label(panel.names()[v], lag));
    }
  }
  return linreg::DesignMatrix(std::move(x), std::move(labels));
}

Eigen::VectorXd response(const Panel& panel, std::size_t v, std::size_t p) {
  const auto n = static_cast<Eigen::Index>(panel.rows() - p);
  return panel.data().col(static_cast<Eigen::Index>(v)).segment(static_cast<Eigen::Index>(p), n);
}

}  // namespace

VarModel fit_var(const Panel& panel, std::size_t p) {
  require_rows(panel, p);
  const std::size_t k = panel.width();
  const auto design = lagged_design(panel, p);
  const auto ki = static_cast<Eigen::Index>(k);

  VarModel model;
  model.p = p;
  model.names = panel.names();
  model.intercepts.resize(ki);
  model.lag_matrices.assign(p, Eigen::MatrixXd::Zero(ki, ki));
  model.n_obs = panel.rows() - p;
  Eigen::MatrixXd resid(static_cast<Eigen::Index>(model.n_obs), ki);
  for (std::size_t v = 0; v < k; ++v) {
    auto fit = linreg::ols_fit(design, response(panel, v, p));
    const auto vi = static_cast<Eigen::Index>(v);
    model.intercepts[vi] = fit.coefficients[0];
    for (std::size_t lag = 0; lag < p; ++lag) {
      for (std::size_t c = 0; c < k; ++c) {
        model.lag_matrices[lag](vi, static_cast<Eigen::Index>(c)) =
            fit.coefficients[static_cast<Eigen::Index>(1 + lag * k + c)];
      }
    }
    resid.col(vi) = fit.residuals;
    model.df_resid = fit.df_resid;
    model.equations.push_back(std::move(fit));
  }
  model.residual_cov = (resid.transpose() * resid) / static_cast<double>(model.df_resid);
  return model;
}

GrangerResult granger_test(const Panel& panel, const std::string& cause, const std::string& effect,
                           std::size_t p, bool controls) {
  if (cause == effect) throw ValidationError("granger: cause and effect are both '" + cause + "'");
  (void)panel.index_of(cause);
  (void)panel.index_of(effect);
  if (controls && panel.width() < 3) {
    throw ValidationError("granger: controls requested but the panel holds only '" + cause +
                          "' and '" + effect + "'");
  }
  const Panel system = controls ? panel : panel.select({cause, effect});
  require_rows(system, p);

  const auto design = lagged_design(system, p);
  const auto y = response(system, system.index_of(effect), p);
  const auto unrestricted = linreg::ols_fit(design, y);
  std::vector<std::string> drop;
  for (std::size_t lag = 1; lag <= p; ++lag) drop.push_back(lag_label(cause, lag));
  const auto restricted = linreg::ols_fit(design.without(drop), y);
  const auto test = linreg::nested_f_test(restricted, unrestricted, p);

  GrangerResult out;
  out.cause = cause;
  out.effect = effect;
  out.p = p;
  out.f_stat = test.f_stat;
  out.p_value = test.p_value;
  out.df_num = test.df_num;
  out.df_den = test.df_den;
  out.n_obs = unrestricted.n_obs;
  out.controls_included = controls;
  return out;
}

std::vector<GrangerResult> granger_table(const Panel& panel, const std::string& cause,
                                         const std::string& effect, std::size_t p_max,
                                         bool both_specs) {
  if (p_max < 1) throw ValidationError("granger: p_max must be at least 1");
  std::vector<GrangerResult> rows;
  std::vector<bool> specs{false};
  if (both_specs) specs.push_back(true);
  for (bool controls : specs) {
    for (std::size_t p = 1; p <= p_max; ++p) {
      rows.push_back(granger_test(panel, cause, effect, p, controls));
      rows.push_back(granger_test(panel, effect, cause, p, controls));
    }
  }
  return rows;
}

bool StationarityReport::all_stationary() const noexcept {
  return std::all_of(columns.begin(), columns.end(),
                     [](const ColumnCheck& c) { return c.stationary; });
}

StationarityReport stationarity_precheck(const Panel& panel, const PrecheckOptions& options) {
  if (panel.rows() < 20) {
    throw InsufficientDataError("stationarity: " + std::to_string(panel.rows()) +
                                " rows; at least 20 needed");
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw ValidationError("stationarity: alpha outside (0, 1)");
  }
  const auto null = exuberance::mc_adf_null(panel.rows(), options.spec, options.n_rep,
                                            options.seed, options.threads);
  StationarityReport report;
  report.alpha = options.alpha;
  report.n_rep = options.n_rep;
  const double cv = null.critical_value(options.alpha);
  for (std::size_t c = 0; c < panel.width(); ++c) {
    ColumnCheck check;
    check.name = panel.names()[c];
    check.critical_value = cv;
    const Eigen::VectorXd col = panel.data().col(static_cast<Eigen::Index>(c));
    try {
      const auto adf = exuberance::adf_stat(std::span<const double>(col.data(), panel.rows()), 0,
                                            panel.rows() - 1, options.spec);
      check.adf = adf;
      check.p_value = null.p_value(adf.stat);
      check.stationary = adf.stat < cv;
    } catch (const NumericalError& e) {
      check.error = e.what();
    }
    report.columns.push_back(std::move(check));
  }
  return report;
}

}  // namespace landbubble::var
