#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "landbubble/exuberance.hpp"
#include "landbubble/linreg.hpp"
#include "landbubble/time_series.hpp"

namespace landbubble::var {

/// Aligned multivariate sample: one row per date, one column per variable.
class Panel {
 public:
  Panel() = default;
  /// Throws ValidationError on shape mismatch, duplicate or empty names,
  /// non-increasing dates or non-finite cells.
  Panel(std::vector<std::string> names, Frequency freq, std::vector<Date> dates,
        Eigen::MatrixXd data);

  /// Inner join of the series on their common dates. Each input must be free
  /// of gaps (GapError otherwise), and so must the joined sample.
  static Panel align(std::span<const TimeSeries> series);

  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] Frequency freq() const noexcept { return freq_; }
  [[nodiscard]] const std::vector<Date>& dates() const noexcept { return dates_; }
  [[nodiscard]] const Eigen::MatrixXd& data() const noexcept { return data_; }
  [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  [[nodiscard]] std::size_t width() const noexcept { return names_.size(); }

  [[nodiscard]] bool contains(const std::string& name) const noexcept;
  /// Throws ValidationError for unknown names.
  [[nodiscard]] std::size_t index_of(const std::string& name) const;
  [[nodiscard]] TimeSeries column(const std::string& name) const;
  /// Columns in the given order.
  [[nodiscard]] Panel select(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> names_;
  Frequency freq_ = Frequency::weekly;
  std::vector<Date> dates_;
  Eigen::MatrixXd data_;
};

/// y_t = c + A_1 y_{t-1} + ... + A_p y_{t-p} + e_t, fitted equation by equation.
struct VarModel {
  std::size_t p = 0;
  std::vector<std::string> names;
  Eigen::VectorXd intercepts;
  /// lag_matrices[i](r, c): effect of variable c at lag i+1 on variable r.
  std::vector<Eigen::MatrixXd> lag_matrices;
  /// Residual covariance with the df_resid denominator.
  Eigen::MatrixXd residual_cov;
  std::size_t n_obs = 0;
  std::size_t df_resid = 0;
  /// One OLS fit per variable, regressors labelled "const", "<name>.L<lag>".
  std::vector<linreg::OlsFit> equations;
};

/// Rows required to fit a VAR(p) on k variables.
[[nodiscard]] std::size_t min_rows(std::size_t k, std::size_t p) noexcept;

[[nodiscard]] VarModel fit_var(const Panel& panel, std::size_t p);

struct GrangerResult {
  std::string cause;
  std::string effect;
  std::size_t p = 0;
  double f_stat = 0.0;
  double p_value = 1.0;
  std::size_t df_num = 0;
  std::size_t df_den = 0;
  std::size_t n_obs = 0;
  bool controls_included = false;
};

/// Block F test that the p lags of `cause` do not enter the `effect` equation.
///
/// Without controls the VAR holds only {cause, effect}; with controls it holds
/// every column of the panel (so at least one variable besides the pair).
[[nodiscard]] GrangerResult granger_test(const Panel& panel, const std::string& cause,
                                         const std::string& effect, std::size_t p,
                                         bool controls);

/// Rows ordered by specification (baseline, then extended), lag 1..p_max and
/// direction (cause -> effect, then effect -> cause).
[[nodiscard]] std::vector<GrangerResult> granger_table(const Panel& panel, const std::string& cause,
                                                       const std::string& effect,
                                                       std::size_t p_max, bool both_specs);

struct PrecheckOptions {
  exuberance::AdfSpec spec{};
  double alpha = 0.05;
  std::size_t n_rep = 2000;
  std::uint64_t seed = 20240101;
  unsigned threads = 0;
};

struct ColumnCheck {
  std::string name;
  /// Empty when the regression could not be run; see `error`.
  std::optional<exuberance::AdfResult> adf;
  double critical_value = 0.0;
  std::optional<double> p_value;
  /// Unit root rejected at alpha.
  bool stationary = false;
  std::string error;
};

struct StationarityReport {
  std::vector<ColumnCheck> columns;
  double alpha = 0.05;
  std::size_t n_rep = 0;
  [[nodiscard]] bool all_stationary() const noexcept;
};

/// Full-sample ADF on every column against a Monte-Carlo left-tail critical
/// value for the panel length.
[[nodiscard]] StationarityReport stationarity_precheck(const Panel& panel,
                                                       const PrecheckOptions& options = {});

}  // namespace landbubble::var
