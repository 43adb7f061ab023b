#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "landbubble/date.hpp"
#include "landbubble/time_series.hpp"

namespace landbubble::exuberance {

/// ADF regression Δy_t = α + β y_{t-1} + Σ_{i=1..k} δ_i Δy_{t-i} + ε_t.
struct AdfSpec {
  /// Fixed lag order k (used unless select_bic is set).
  std::size_t n_lags = 1;
  /// Choose k in [0, max_lags] per window by BIC on a common sample.
  bool select_bic = false;
  std::size_t max_lags = 4;

  /// Largest lag order any window may use.
  [[nodiscard]] std::size_t lag_ceiling() const noexcept { return select_bic ? max_lags : n_lags; }
  /// Shortest admissible window: k + 5 observations, and never fewer than
  /// needed to leave one residual degree of freedom (2k + 4).
  [[nodiscard]] std::size_t min_window_length() const noexcept {
    const std::size_t k = lag_ceiling();
    return std::max(k + 5, 2 * k + 4);
  }
};

struct AdfResult {
  /// t-ratio on β.
  double stat = 0.0;
  std::size_t window_start = 0;
  /// Inclusive.
  std::size_t window_end = 0;
  /// window length - 1 - k.
  std::size_t n_obs_used = 0;
  std::size_t n_lags = 0;
};

/// How BSADF windows are evaluated. Both produce the same statistics;
/// `naive` refits every window from scratch through the OLS engine and is the
/// reference the fast path is checked against.
enum class Method { incremental, naive };

struct BsadfPoint {
  std::size_t t_index = 0;
  Date date;
  double stat = 0.0;
  /// Start s1 of the window attaining the supremum.
  std::size_t argmax_start = 0;
};

/// Finite-sample critical values of the BSADF sequence under a driftless
/// unit-root null, one row per evaluable observation t in [r0, T-1].
struct CvTable {
  std::size_t T = 0;
  std::size_t r0 = 0;
  AdfSpec spec;
  std::vector<double> alphas;
  /// cv_by_t[t - r0][a] is the alphas[a] quantile of BSADF_t under the null.
  std::vector<std::vector<double>> cv_by_t;
  std::size_t n_rep = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t alpha_index(double level) const;
  [[nodiscard]] double cv(std::size_t t, double level) const;
};

struct BubbleEpisode {
  Date start_date;
  Date end_date;
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  double peak_stat = 0.0;

  [[nodiscard]] std::size_t length() const noexcept { return end_index - start_index + 1; }
};

struct DatedFlag {
  std::size_t t_index = 0;
  Date date;
  double stat = 0.0;
  double cv = 0.0;
  bool flag = false;
};

struct DatestampResult {
  std::vector<DatedFlag> flags;
  std::vector<BubbleEpisode> episodes;
  std::size_t evaluable = 0;
  std::size_t flagged = 0;
  /// flagged / evaluable.
  double pct_flagged = 0.0;
};

/// Rule-of-thumb minimum window ceil(T * (0.01 + 1.8 / sqrt(T))).
[[nodiscard]] std::size_t rule_of_thumb_window(std::size_t T);

/// ADF statistic on the window y[s1..s2] (inclusive).
[[nodiscard]] AdfResult adf_stat(std::span<const double> y, std::size_t s1, std::size_t s2,
                                 const AdfSpec& spec);
/// ADF statistic using the whole series as the window.
[[nodiscard]] AdfResult adf_stat(const TimeSeries& window, const AdfSpec& spec);

/// sup over s1 in [0, r2 - r0] of ADF on [s1, r2].
[[nodiscard]] BsadfPoint bsadf_at(std::span<const double> y, std::size_t r2, std::size_t r0,
                                  const AdfSpec& spec, Method method = Method::incremental);
[[nodiscard]] BsadfPoint bsadf_at(const TimeSeries& series, std::size_t r2, std::size_t r0,
                                  const AdfSpec& spec, Method method = Method::incremental);

/// BSADF statistic for every r2 in [r0, T-1]; element i belongs to r2 = r0 + i.
[[nodiscard]] std::vector<BsadfPoint> bsadf_series(const TimeSeries& series, std::size_t r0,
                                                   const AdfSpec& spec,
                                                   Method method = Method::incremental);
/// Undated variant over a raw sample.
[[nodiscard]] std::vector<BsadfPoint> bsadf_points(std::span<const double> y, std::size_t r0,
                                                   const AdfSpec& spec,
                                                   Method method = Method::incremental);

struct McOptions {
  /// 0 = hardware concurrency.
  unsigned threads = 0;
  Method method = Method::incremental;
};

/// Simulates n_rep driftless Gaussian random walks of length T and takes per-t
/// empirical quantiles of their BSADF sequences. Replication i is seeded with
/// derive_seed(seed, i), so the table does not depend on the thread count.
[[nodiscard]] CvTable mc_critical_values(std::size_t T, std::size_t r0, const AdfSpec& spec,
                                         std::span<const double> alphas, std::size_t n_rep,
                                         std::uint64_t seed, const McOptions& options = {});

/// Flags t iff BSADF_t > cv_t at `level`; episodes are maximal flagged runs.
[[nodiscard]] DatestampResult datestamp(std::span<const BsadfPoint> points, const CvTable& cv,
                                        double level);

/// Null distribution of the full-sample ADF statistic for a length-T random walk.
struct AdfNullDistribution {
  std::size_t T = 0;
  AdfSpec spec;
  /// Sorted ascending.
  std::vector<double> stats;

  /// Left-tail critical value: reject the unit root when stat < critical_value(alpha).
  [[nodiscard]] double critical_value(double alpha) const;
  /// Share of null statistics at or below `stat`.
  [[nodiscard]] double p_value(double stat) const;
};

[[nodiscard]] AdfNullDistribution mc_adf_null(std::size_t T, const AdfSpec& spec,
                                              std::size_t n_rep, std::uint64_t seed,
                                              unsigned threads = 0);

}  // namespace landbubble::exuberance
