#include "landbubble/exuberance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "landbubble/error.hpp"
#include "landbubble/linreg.hpp"
#include "landbubble/rng.hpp"
#include "landbubble/series.hpp"
#include "parallel.hpp"

namespace landbubble::exuberance {

namespace {

constexpr std::size_t kBetaColumn = 1;
/// Residual sum of squares below this share of sum (dy^2) leaves the t-ratio undefined.
constexpr double kPerfectFit = linreg::kRankTolerance * linreg::kRankTolerance;

void require_window(std::size_t length, const AdfSpec& spec) {
  if (length < spec.min_window_length()) {
    throw InsufficientDataError("adf: window of " + std::to_string(length) +
                                " observations is shorter than the minimum " +
                                std::to_string(spec.min_window_length()) + " for " +
                                std::to_string(spec.lag_ceiling()) + " lag(s)");
  }
}

// Regression rows t in [first_row, s2] of the k-lag ADF design.
linreg::OlsFit fit_adf(std::span<const double> y, std::size_t first_row, std::size_t s2,
                       std::size_t k) {
  const auto n = static_cast<Eigen::Index>(s2 - first_row + 1);
  const auto m = static_cast<Eigen::Index>(k + 2);
  Eigen::MatrixXd x(n, m);
  Eigen::VectorXd dy(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t t = first_row + static_cast<std::size_t>(r);
    dy[r] = y[t] - y[t - 1];
    x(r, 0) = 1.0;
    x(r, 1) = y[t - 1];
    for (std::size_t i = 1; i <= k; ++i) {
      x(r, static_cast<Eigen::Index>(i + 1)) = y[t - i] - y[t - i - 1];
    }
  }
  std::vector<std::string> labels{"const", "y_lag1"};
  for (std::size_t i = 1; i <= k; ++i) labels.push_back("dy_lag" + std::to_string(i));
  return linreg::ols_fit(linreg::DesignMatrix(std::move(x), std::move(labels)), dy);
}

std::size_t select_lag_bic(std::span<const double> y, std::size_t s1, std::size_t s2,
                           std::size_t max_lags) {
  // Common sample: every candidate uses the rows available to the largest k.
  const std::size_t first_row = s1 + max_lags + 1;
  const double n = static_cast<double>(s2 - first_row + 1);
  std::size_t best_k = 0;
  double best_bic = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= max_lags; ++k) {
    double bic;
    try {
      const auto fit = fit_adf(y, first_row, s2, k);
      bic = n * std::log(std::max(fit.rss, std::numeric_limits<double>::min()) / n) +
            static_cast<double>(k + 2) * std::log(n);
    } catch (const InsufficientDataError&) {
      continue;
    } catch (const SingularDesignError&) {
      continue;
    }
    if (bic < best_bic) {
      best_bic = bic;
      best_k = k;
    }
  }
  return best_k;
}

AdfResult adf_window(std::span<const double> y, std::size_t s1, std::size_t s2,
                     const AdfSpec& spec) {
  if (s2 >= y.size() || s1 > s2) {
    throw ValidationError("adf: window [" + std::to_string(s1) + ", " + std::to_string(s2) +
                          "] outside a sample of " + std::to_string(y.size()));
  }
  require_window(s2 - s1 + 1, spec);
  const std::size_t k = spec.select_bic ? select_lag_bic(y, s1, s2, spec.max_lags) : spec.n_lags;
  const auto fit = fit_adf(y, s1 + k + 1, s2, k);
  AdfResult out;
  out.stat = fit.coefficients[kBetaColumn] / fit.std_errors[kBetaColumn];
  out.window_start = s1;
  out.window_end = s2;
  out.n_obs_used = fit.n_obs;
  out.n_lags = k;
  double dy2 = 0.0;
  for (std::size_t t = s1 + k + 1; t <= s2; ++t) dy2 += (y[t] - y[t - 1]) * (y[t] - y[t - 1]);
  if (!(fit.rss > kPerfectFit * dy2)) out.stat = std::numeric_limits<double>::quiet_NaN();
  if (!std::isfinite(out.stat)) {
    throw SingularDesignError("adf: non-finite t-ratio on window [" + std::to_string(s1) + ", " +
                                  std::to_string(s2) + "]",
                              {"y_lag1"});
  }
  return out;
}

// Givens-updated QR of the ADF design, grown one row at a time. Adding rows in
// decreasing t walks the window start s1 backwards for a fixed end r2, so the
// statistics for all windows ending at r2 cost one O(k^2) update each.
class WindowAccumulator {
 public:
  explicit WindowAccumulator(std::size_t k)
      : k_(k), m_(k + 2), r_(m_ * m_), z_(m_), norm2_(m_), row_(m_), w_(m_), b_(m_) {}

  void reset() {
    std::fill(r_.begin(), r_.end(), 0.0);
    std::fill(z_.begin(), z_.end(), 0.0);
    std::fill(norm2_.begin(), norm2_.end(), 0.0);
    rss_ = 0.0;
    dy2_ = 0.0;
    rows_ = 0;
  }

  void add_row(std::span<const double> y, std::size_t t) {
    row_[0] = 1.0;
    row_[1] = y[t - 1];
    for (std::size_t i = 1; i <= k_; ++i) row_[i + 1] = y[t - i] - y[t - i - 1];
    double b = y[t] - y[t - 1];
    dy2_ += b * b;
    for (std::size_t j = 0; j < m_; ++j) norm2_[j] += row_[j] * row_[j];

    for (std::size_t j = 0; j < m_; ++j) {
      const double a = row_[j];
      if (a == 0.0) continue;
      double* rj = &r_[j * m_];
      const double h = std::sqrt(rj[j] * rj[j] + a * a);
      const double c = rj[j] / h;
      const double s = a / h;
      rj[j] = h;
      for (std::size_t l = j + 1; l < m_; ++l) {
        const double rl = rj[l];
        const double al = row_[l];
        rj[l] = c * rl + s * al;
        row_[l] = c * al - s * rl;
      }
      const double zj = z_[j];
      z_[j] = c * zj + s * b;
      b = c * b - s * zj;
    }
    rss_ += b * b;
    ++rows_;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }

  /// t-ratio on the y_{t-1} coefficient, or nullopt for a rank-deficient design.
  [[nodiscard]] std::optional<double> beta_t_ratio() {
    for (std::size_t j = 0; j < m_; ++j) {
      const double d = std::abs(r_[j * m_ + j]);
      if (!(d > linreg::kRankTolerance * std::sqrt(norm2_[j]))) return std::nullopt;
    }
    // Back substitution for the coefficients.
    for (std::size_t jj = m_; jj-- > 0;) {
      double acc = z_[jj];
      for (std::size_t l = jj + 1; l < m_; ++l) acc -= r_[jj * m_ + l] * b_[l];
      b_[jj] = acc / r_[jj * m_ + jj];
    }
    // Row kBetaColumn of R^-1 via R^T w = e_beta.
    double w2 = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
      double acc = j == kBetaColumn ? 1.0 : 0.0;
      for (std::size_t l = 0; l < j; ++l) acc -= r_[l * m_ + j] * w_[l];
      w_[j] = acc / r_[j * m_ + j];
      w2 += w_[j] * w_[j];
    }
    if (!(rss_ > kPerfectFit * dy2_)) return std::nullopt;
    const double sigma2 = rss_ / static_cast<double>(rows_ - m_);
    const double t = b_[kBetaColumn] / std::sqrt(sigma2 * w2);
    if (!std::isfinite(t)) return std::nullopt;
    return t;
  }

 private:
  std::size_t k_;
  std::size_t m_;
  std::vector<double> r_;
  std::vector<double> z_;
  std::vector<double> norm2_;
  std::vector<double> row_;
  std::vector<double> w_;
  std::vector<double> b_;
  double rss_ = 0.0;
  double dy2_ = 0.0;
  std::size_t rows_ = 0;
};

void validate_bsadf_args(std::size_t size, std::size_t r2, std::size_t r0, const AdfSpec& spec) {
  if (r0 < spec.min_window_length()) {
    throw ValidationError("bsadf: minimum window r0 = " + std::to_string(r0) +
                          " is too small for " + std::to_string(spec.lag_ceiling()) +
                          " lag(s); need r0 >= " + std::to_string(spec.min_window_length()));
  }
  if (r2 < r0) {
    throw ValidationError("bsadf: r2 = " + std::to_string(r2) + " precedes r0 = " +
                          std::to_string(r0));
  }
  if (r2 >= size) {
    throw ValidationError("bsadf: r2 = " + std::to_string(r2) + " beyond a sample of " +
                          std::to_string(size));
  }
}

BsadfPoint bsadf_naive(std::span<const double> y, std::size_t r2, std::size_t r0,
                       const AdfSpec& spec) {
  std::optional<BsadfPoint> best;
  for (std::size_t s1 = 0; s1 + r0 <= r2; ++s1) {
    double stat;
    try {
      stat = adf_window(y, s1, r2, spec).stat;
    } catch (const SingularDesignError&) {
      continue;
    }
    if (!best || stat > best->stat) best = BsadfPoint{r2, Date{}, stat, s1};
  }
  if (!best) {
    throw NoValidWindowError("bsadf: every window ending at t = " + std::to_string(r2) +
                             " has a singular ADF design");
  }
  return *best;
}

BsadfPoint bsadf_incremental(std::span<const double> y, std::size_t r2, std::size_t r0,
                             const AdfSpec& spec, WindowAccumulator& acc) {
  const std::size_t k = spec.n_lags;
  acc.reset();
  std::optional<BsadfPoint> best;
  // Row t belongs to the windows with s1 <= t - k - 1.
  const std::size_t last_start = r2 - r0;
  for (std::size_t t = r2; t >= k + 1; --t) {
    acc.add_row(y, t);
    const std::size_t s1 = t - k - 1;
    if (s1 <= last_start) {
      if (auto stat = acc.beta_t_ratio(); stat && (!best || *stat >= best->stat)) {
        best = BsadfPoint{r2, Date{}, *stat, s1};
      }
    }
    if (t == k + 1) break;
  }
  if (!best) {
    throw NoValidWindowError("bsadf: every window ending at t = " + std::to_string(r2) +
                             " has a singular ADF design");
  }
  return *best;
}

bool use_naive(const AdfSpec& spec, Method method) {
  return method == Method::naive || spec.select_bic;
}

}  // namespace

std::size_t rule_of_thumb_window(std::size_t T) {
  if (T == 0) throw ValidationError("rule_of_thumb_window: empty sample");
  const double t = static_cast<double>(T);
  // The tiny slack keeps products that land on an integer from rounding up.
  return static_cast<std::size_t>(std::ceil(t * (0.01 + 1.8 / std::sqrt(t)) - 1e-9));
}

AdfResult adf_stat(std::span<const double> y, std::size_t s1, std::size_t s2,
                   const AdfSpec& spec) {
  for (std::size_t i = s1; i <= s2 && i < y.size(); ++i) {
    if (!std::isfinite(y[i])) throw ValidationError("adf: non-finite value in window");
  }
  return adf_window(y, s1, s2, spec);
}

AdfResult adf_stat(const TimeSeries& window, const AdfSpec& spec) {
  if (window.empty()) throw InsufficientDataError("adf: empty window");
  return adf_stat(window.values(), 0, window.size() - 1, spec);
}

BsadfPoint bsadf_at(std::span<const double> y, std::size_t r2, std::size_t r0, const AdfSpec& spec,
                    Method method) {
  validate_bsadf_args(y.size(), r2, r0, spec);
  if (use_naive(spec, method)) return bsadf_naive(y, r2, r0, spec);
  WindowAccumulator acc(spec.n_lags);
  return bsadf_incremental(y, r2, r0, spec, acc);
}

BsadfPoint bsadf_at(const TimeSeries& series, std::size_t r2, std::size_t r0, const AdfSpec& spec,
                    Method method) {
  auto p = bsadf_at(series.values(), r2, r0, spec, method);
  p.date = series.date(r2);
  return p;
}

std::vector<BsadfPoint> bsadf_points(std::span<const double> y, std::size_t r0,
                                     const AdfSpec& spec, Method method) {
  if (y.size() <= r0) {
    throw InsufficientDataError("bsadf: sample of " + std::to_string(y.size()) +
                                " observations needs more than r0 = " + std::to_string(r0));
  }
  validate_bsadf_args(y.size(), r0, r0, spec);
  std::vector<BsadfPoint> out;
  out.reserve(y.size() - r0);
  if (use_naive(spec, method)) {
    for (std::size_t r2 = r0; r2 < y.size(); ++r2) out.push_back(bsadf_naive(y, r2, r0, spec));
  } else {
    WindowAccumulator acc(spec.n_lags);
    for (std::size_t r2 = r0; r2 < y.size(); ++r2) {
      out.push_back(bsadf_incremental(y, r2, r0, spec, acc));
    }
  }
  return out;
}

std::vector<BsadfPoint> bsadf_series(const TimeSeries& series, std::size_t r0, const AdfSpec& spec,
                                     Method method) {
  auto out = bsadf_points(series.values(), r0, spec, method);
  for (auto& p : out) p.date = series.date(p.t_index);
  return out;
}

std::size_t CvTable::alpha_index(double level) const {
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (std::abs(alphas[a] - level) < 1e-12) return a;
  }
  throw ValidationError("critical-value table has no level " + std::to_string(level));
}

double CvTable::cv(std::size_t t, double level) const {
  if (t < r0 || t >= T) {
    throw ValidationError("critical-value table covers t in [" + std::to_string(r0) + ", " +
                          std::to_string(T - 1) + "], asked for " + std::to_string(t));
  }
  return cv_by_t[t - r0][alpha_index(level)];
}

CvTable mc_critical_values(std::size_t T, std::size_t r0, const AdfSpec& spec,
                           std::span<const double> alphas, std::size_t n_rep, std::uint64_t seed,
                           const McOptions& options) {
  if (n_rep < 200) throw ValidationError("mc_critical_values: need at least 200 replications");
  if (alphas.empty()) throw ValidationError("mc_critical_values: no levels requested");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("mc_critical_values: level outside (0, 1)");
  }
  if (T <= r0) {
    throw ValidationError("mc_critical_values: T = " + std::to_string(T) +
                          " must exceed r0 = " + std::to_string(r0));
  }
  validate_bsadf_args(T, r0, r0, spec);

  const std::size_t width = T - r0;
  std::vector<double> stats(n_rep * width);
  detail::parallel_for(n_rep, options.threads, [&](std::size_t rep) {
    Rng rng(derive_seed(seed, rep));
    std::vector<double> path(T);
    path[0] = 0.0;
    for (std::size_t t = 1; t < T; ++t) path[t] = path[t - 1] + rng.normal();
    const auto points = bsadf_points(path, r0, spec, options.method);
    for (std::size_t i = 0; i < width; ++i) stats[rep * width + i] = points[i].stat;
  });

  CvTable table;
  table.T = T;
  table.r0 = r0;
  table.spec = spec;
  table.alphas.assign(alphas.begin(), alphas.end());
  table.n_rep = n_rep;
  table.seed = seed;
  table.cv_by_t.resize(width);
  std::vector<double> column(n_rep);
  for (std::size_t i = 0; i < width; ++i) {
    for (std::size_t rep = 0; rep < n_rep; ++rep) column[rep] = stats[rep * width + i];
    std::sort(column.begin(), column.end());
    auto& row = table.cv_by_t[i];
    row.reserve(alphas.size());
    for (double a : alphas) row.push_back(series::quantile_sorted(column, a));
  }
  return table;
}

DatestampResult datestamp(std::span<const BsadfPoint> points, const CvTable& cv, double level) {
  if (points.size() != cv.T - cv.r0) {
    throw ValidationError("datestamp: " + std::to_string(points.size()) +
                          " BSADF points but the critical-value table covers " +
                          std::to_string(cv.T - cv.r0) + " observations (T = " +
                          std::to_string(cv.T) + ", r0 = " + std::to_string(cv.r0) + ")");
  }
  const std::size_t a = cv.alpha_index(level);
  DatestampResult out;
  out.flags.reserve(points.size());
  std::optional<BubbleEpisode> open;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.t_index != cv.r0 + i) {
      throw ValidationError("datestamp: BSADF point " + std::to_string(i) + " has t = " +
                            std::to_string(p.t_index) + ", expected " +
                            std::to_string(cv.r0 + i));
    }
    const double c = cv.cv_by_t[i][a];
    const bool flag = p.stat > c;
    out.flags.push_back({p.t_index, p.date, p.stat, c, flag});
    if (flag) {
      ++out.flagged;
      if (!open) {
        open = BubbleEpisode{p.date, p.date, p.t_index, p.t_index, p.stat};
      } else {
        open->end_date = p.date;
        open->end_index = p.t_index;
        open->peak_stat = std::max(open->peak_stat, p.stat);
      }
    } else if (open) {
      out.episodes.push_back(*open);
      open.reset();
    }
  }
  if (open) out.episodes.push_back(*open);
  out.evaluable = points.size();
  out.pct_flagged =
      out.evaluable == 0 ? 0.0 : static_cast<double>(out.flagged) / static_cast<double>(out.evaluable);
  return out;
}

double AdfNullDistribution::critical_value(double alpha) const {
  return series::quantile_sorted(stats, alpha);
}

double AdfNullDistribution::p_value(double stat) const {
  const auto below = std::upper_bound(stats.begin(), stats.end(), stat) - stats.begin();
  return static_cast<double>(below) / static_cast<double>(stats.size());
}

AdfNullDistribution mc_adf_null(std::size_t T, const AdfSpec& spec, std::size_t n_rep,
                                std::uint64_t seed, unsigned threads) {
  if (n_rep < 200) throw ValidationError("mc_adf_null: need at least 200 replications");
  require_window(T, spec);
  AdfNullDistribution out;
  out.T = T;
  out.spec = spec;
  out.stats.resize(n_rep);
  detail::parallel_for(n_rep, threads, [&](std::size_t rep) {
    Rng rng(derive_seed(seed, rep));
    std::vector<double> path(T);
    for (std::size_t t = 1; t < T; ++t) path[t] = path[t - 1] + rng.normal();
    out.stats[rep] = adf_window(path, 0, T - 1, spec).stat;
  });
  std::sort(out.stats.begin(), out.stats.end());
  return out;
}

}  // namespace landbubble::exuberance
