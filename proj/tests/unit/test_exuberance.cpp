#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "landbubble/error.hpp"
#include "landbubble/exuberance.hpp"
#include "landbubble/rng.hpp"
#include "landbubble/synthkit.hpp"
#include "oracles.hpp"

using namespace landbubble;
using namespace landbubble::exuberance;
using testing_support::make_series;

namespace {

std::vector<double> walk(std::size_t n, std::uint64_t seed) {
  return testing_support::cumsum(testing_support::normals(n, seed));
}

std::vector<double> ar1(std::size_t n, double rho, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> y(n);
  y[0] = rng.normal();
  for (std::size_t t = 1; t < n; ++t) y[t] = rho * y[t - 1] + rng.normal();
  return y;
}

CvTable flat_table(std::size_t T, std::size_t r0, double cv) {
  CvTable t;
  t.T = T;
  t.r0 = r0;
  t.alphas = {0.95};
  t.cv_by_t.assign(T - r0, {cv});
  t.n_rep = 200;
  return t;
}

std::vector<BsadfPoint> points_from(const std::vector<double>& stats, std::size_t r0) {
  std::vector<BsadfPoint> out;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    out.push_back({r0 + i, Date(2021, 1, 4) + static_cast<std::int32_t>(r0 + i), stats[i], 0});
  }
  return out;
}

}  // namespace

TEST(AdfSpec, MinimumWindow) {
  EXPECT_EQ(AdfSpec{0}.min_window_length(), 5u);
  EXPECT_EQ(AdfSpec{1}.min_window_length(), 6u);
  EXPECT_EQ(AdfSpec{3}.min_window_length(), 10u);
  AdfSpec bic;
  bic.select_bic = true;
  bic.max_lags = 2;
  EXPECT_EQ(bic.lag_ceiling(), 2u);
}

TEST(MinWindow, RuleOfThumb) {
  EXPECT_EQ(rule_of_thumb_window(100), 19u);
  EXPECT_EQ(rule_of_thumb_window(300), 35u);
  EXPECT_EQ(rule_of_thumb_window(600), 51u);
  EXPECT_THROW((void)rule_of_thumb_window(0), ValidationError);
}

TEST(Adf, DickeyFullerMatchesTwoVariableOracle) {
  // Ramp plus noise; k = 0 is the plain Dickey-Fuller regression.
  std::vector<double> y(60);
  const auto e = testing_support::normals(60, 1);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = static_cast<double>(t + 1) + 0.3 * e[t];
  const auto r = adf_stat(make_series(y), AdfSpec{0});
  EXPECT_NEAR(r.stat, static_cast<double>(oracle::adf(y, 0, 59, 0)), 1e-10);
  EXPECT_EQ(r.n_obs_used, 59u);
  EXPECT_EQ(r.window_start, 0u);
  EXPECT_EQ(r.window_end, 59u);
}

TEST(Adf, AugmentedMatchesOracle) {
  const auto y = walk(80, 2);
  for (std::size_t k = 0; k <= 3; ++k) {
    const auto r = adf_stat(y, 5, 70, AdfSpec{k});
    EXPECT_NEAR(r.stat, static_cast<double>(oracle::adf(y, 5, 70, k)), 1e-10);
    EXPECT_EQ(r.n_obs_used, 66u - 1u - k);
  }
}

TEST(Adf, PureRampIsSingular) {
  std::vector<double> y(20);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = static_cast<double>(t + 1);
  EXPECT_THROW((void)adf_stat(make_series(y), AdfSpec{0}), SingularDesignError);
}

TEST(Adf, ConstantWindowIsSingular) {
  EXPECT_THROW((void)adf_stat(make_series(std::vector<double>(30, 4.0)), AdfSpec{1}),
               SingularDesignError);
}

TEST(Adf, TooShortWindow) {
  EXPECT_THROW((void)adf_stat(make_series(walk(5, 3)), AdfSpec{1}), InsufficientDataError);
  EXPECT_NO_THROW((void)adf_stat(make_series(walk(6, 3)), AdfSpec{1}));
}

TEST(Adf, StationaryAr1IsStronglyNegative) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    if (adf_stat(make_series(ar1(200, 0.2, seed)), AdfSpec{1}).stat < -3.0) ++hits;
  }
  EXPECT_GE(hits, 90);
}

TEST(Adf, ExplosiveAr1IsPositive) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    if (adf_stat(make_series(ar1(100, 1.05, seed)), AdfSpec{1}).stat > 0.0) ++hits;
  }
  EXPECT_GE(hits, 90);
}

TEST(Adf, AffineInvariance) {
  const auto y = walk(90, 4);
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = 3.7 * y[i] - 250.0;
  for (std::size_t k = 0; k <= 2; ++k) {
    EXPECT_NEAR(adf_stat(make_series(y), AdfSpec{k}).stat, adf_stat(make_series(z), AdfSpec{k}).stat,
                1e-9);
  }
}

TEST(Adf, BicChoosesWithinRange) {
  AdfSpec spec;
  spec.select_bic = true;
  spec.max_lags = 3;
  const auto r = adf_stat(make_series(walk(120, 5)), spec);
  EXPECT_LE(r.n_lags, 3u);
  EXPECT_EQ(r.n_obs_used, 120u - 1u - r.n_lags);
}

TEST(Bsadf, SingleWindowAtR0) {
  const auto y = walk(30, 6);
  const auto p = bsadf_at(y, 12, 12, AdfSpec{1});
  EXPECT_EQ(p.argmax_start, 0u);
  EXPECT_NEAR(p.stat, adf_stat(y, 0, 12, AdfSpec{1}).stat, 1e-12);
}

TEST(Bsadf, DominatesFullWindow) {
  const auto s = make_series(walk(150, 7));
  const auto pts = bsadf_series(s, 20, AdfSpec{1});
  for (const auto& p : pts) {
    EXPECT_GE(p.stat + 1e-12, adf_stat(s.values(), 0, p.t_index, AdfSpec{1}).stat);
    EXPECT_LE(p.argmax_start, p.t_index - 20);
    EXPECT_EQ(p.date, s.date(p.t_index));
  }
}

TEST(Bsadf, MatchesEnumerationOracle) {
  const auto y = synth::gen_explosive(40, std::vector<synth::Window>{{25, 33}}, 1.08, 1.0, 8, 5.0)
                     .series;
  const std::vector<double> v(y.values().begin(), y.values().end());
  const auto pts = bsadf_series(y, 10, AdfSpec{1});
  ASSERT_EQ(pts.size(), 30u);
  for (const auto& p : pts) {
    const auto want = oracle::bsadf(v, p.t_index, 10, 1);
    EXPECT_NEAR(p.stat, static_cast<double>(want.stat), 1e-12) << "t=" << p.t_index;
    EXPECT_EQ(p.argmax_start, want.argmax);
  }
}

TEST(Bsadf, NaiveAndIncrementalAgree) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = make_series(walk(120, seed + 40));
    for (std::size_t k : {0u, 1u, 2u}) {
      const auto a = bsadf_series(s, 15, AdfSpec{k}, Method::incremental);
      const auto b = bsadf_series(s, 15, AdfSpec{k}, Method::naive);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].stat, b[i].stat, 1e-10);
    }
  }
}

TEST(Bsadf, OnePointWhenLengthIsR0PlusOne) {
  const auto s = make_series(walk(13, 9));
  const auto pts = bsadf_series(s, 12, AdfSpec{1});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].t_index, 12u);
  EXPECT_THROW((void)bsadf_series(make_series(walk(12, 9)), 12, AdfSpec{1}), InsufficientDataError);
}

TEST(Bsadf, NoisyDoublingAgainstOracle) {
  std::vector<double> y(30);
  const auto e = testing_support::normals(30, 10);
  for (std::size_t t = 0; t < 30; ++t) y[t] = std::pow(1.15, static_cast<double>(t)) + 0.2 * e[t];
  const auto pts = bsadf_points(y, 8, AdfSpec{0});
  for (const auto& p : pts) {
    EXPECT_NEAR(p.stat, static_cast<double>(oracle::bsadf(y, p.t_index, 8, 0).stat), 1e-12);
  }
}

TEST(Bsadf, NoTimeReversalSymmetry) {
  const auto y = walk(45, 11);
  std::vector<double> rev(y.rbegin(), y.rend());
  const auto a = bsadf_points(y, 10, AdfSpec{1});
  const auto b = bsadf_points(rev, 10, AdfSpec{1});
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= std::abs(a[i].stat - b[i].stat) > 1e-6;
  EXPECT_TRUE(differs);
  // Recorded from the enumeration oracle.
  EXPECT_NEAR(b.back().stat, static_cast<double>(oracle::bsadf(rev, 44, 10, 1).stat), 1e-12);
}

TEST(Bsadf, PrefixProperty) {
  const auto y = walk(100, 12);
  const std::vector<double> head(y.begin(), y.begin() + 60);
  const auto full = bsadf_points(y, 15, AdfSpec{1});
  const auto part = bsadf_points(head, 15, AdfSpec{1});
  for (std::size_t i = 0; i < part.size(); ++i) {
    EXPECT_EQ(part[i].stat, full[i].stat);
    EXPECT_EQ(part[i].argmax_start, full[i].argmax_start);
  }
}

TEST(Bsadf, AffineInvariance) {
  const auto y = walk(80, 13);
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = 0.02 * y[i] + 9.0;
  const auto a = bsadf_points(y, 12, AdfSpec{1});
  const auto b = bsadf_points(z, 12, AdfSpec{1});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].stat, b[i].stat, 1e-9);
}

TEST(Bsadf, ArgumentValidation) {
  const auto y = walk(50, 14);
  EXPECT_THROW((void)bsadf_at(y, 10, 4, AdfSpec{1}), ValidationError);
  EXPECT_THROW((void)bsadf_at(y, 9, 10, AdfSpec{1}), ValidationError);
  EXPECT_THROW((void)bsadf_at(y, 50, 10, AdfSpec{1}), ValidationError);
}

TEST(Bsadf, AllWindowsSingularThrows) {
  std::vector<double> y(30, 1.0);
  EXPECT_THROW((void)bsadf_at(y, 20, 10, AdfSpec{1}), NoValidWindowError);
  EXPECT_THROW((void)bsadf_at(y, 20, 10, AdfSpec{1}, Method::naive), NoValidWindowError);
}

TEST(CriticalValues, DeterministicAndThreadIndependent) {
  const std::vector<double> alphas{0.9, 0.95, 0.99};
  const auto a = mc_critical_values(60, 12, AdfSpec{1}, alphas, 200, 77, {1, Method::incremental});
  const auto b = mc_critical_values(60, 12, AdfSpec{1}, alphas, 200, 77, {1, Method::incremental});
  const auto c = mc_critical_values(60, 12, AdfSpec{1}, alphas, 200, 77, {4, Method::incremental});
  EXPECT_EQ(a.cv_by_t, b.cv_by_t);
  EXPECT_EQ(a.cv_by_t, c.cv_by_t);
  ASSERT_EQ(a.cv_by_t.size(), 48u);
  for (const auto& row : a.cv_by_t) {
    EXPECT_LE(row[0], row[1]);
    EXPECT_LE(row[1], row[2]);
  }
  EXPECT_EQ(a.cv(12, 0.95), a.cv_by_t[0][1]);
  const auto other = mc_critical_values(60, 12, AdfSpec{1}, alphas, 200, 78, {1, Method::incremental});
  EXPECT_NE(a.cv_by_t, other.cv_by_t);
}

TEST(CriticalValues, NaivePathGivesSameTable) {
  const std::vector<double> alphas{0.95};
  const auto a = mc_critical_values(40, 10, AdfSpec{1}, alphas, 200, 5, {1, Method::incremental});
  const auto b = mc_critical_values(40, 10, AdfSpec{1}, alphas, 200, 5, {1, Method::naive});
  for (std::size_t i = 0; i < a.cv_by_t.size(); ++i) EXPECT_NEAR(a.cv_by_t[i][0], b.cv_by_t[i][0], 1e-9);
}

TEST(CriticalValues, ParameterValidation) {
  const std::vector<double> alphas{0.95};
  const std::vector<double> bad{1.5};
  EXPECT_THROW((void)mc_critical_values(60, 12, AdfSpec{1}, alphas, 199, 1), ValidationError);
  EXPECT_THROW((void)mc_critical_values(60, 12, AdfSpec{1}, bad, 200, 1), ValidationError);
  EXPECT_THROW((void)mc_critical_values(12, 12, AdfSpec{1}, alphas, 200, 1), ValidationError);
  const auto t = mc_critical_values(40, 10, AdfSpec{1}, alphas, 200, 1);
  EXPECT_THROW((void)t.alpha_index(0.9), ValidationError);
}

TEST(Datestamp, AllBelowCriticalValue) {
  const auto r = datestamp(points_from(std::vector<double>(10, -1.0), 5), flat_table(15, 5, 0.5), 0.95);
  EXPECT_TRUE(r.episodes.empty());
  EXPECT_EQ(r.pct_flagged, 0.0);
  EXPECT_EQ(r.evaluable, 10u);
}

TEST(Datestamp, SingleRunIsOneEpisode) {
  std::vector<double> stats(20, 0.0);
  for (std::size_t i = 6; i < 11; ++i) stats[i] = 2.0 + static_cast<double>(i);
  const auto r = datestamp(points_from(stats, 5), flat_table(25, 5, 1.0), 0.95);
  ASSERT_EQ(r.episodes.size(), 1u);
  EXPECT_EQ(r.episodes[0].length(), 5u);
  EXPECT_EQ(r.episodes[0].start_index, 11u);
  EXPECT_EQ(r.episodes[0].end_index, 15u);
  EXPECT_EQ(r.episodes[0].peak_stat, 12.0);
  EXPECT_EQ(r.flagged, 5u);
  EXPECT_DOUBLE_EQ(r.pct_flagged, 0.25);
  for (const auto& f : r.flags) {
    const bool inside = f.t_index >= 11 && f.t_index <= 15;
    EXPECT_EQ(f.flag, inside);
  }
}

TEST(Datestamp, EqualityIsNotExceedance) {
  const auto r = datestamp(points_from({1.0, 1.0}, 5), flat_table(7, 5, 1.0), 0.95);
  EXPECT_EQ(r.flagged, 0u);
}

TEST(Datestamp, RejectsMismatchedTable) {
  EXPECT_THROW((void)datestamp(points_from({1.0, 2.0}, 5), flat_table(10, 5, 0.0), 0.95),
               ValidationError);
  EXPECT_THROW((void)datestamp(points_from({1.0, 2.0}, 6), flat_table(7, 5, 0.0), 0.95),
               ValidationError);
}

TEST(AdfNull, CriticalValueNearDickeyFullerTable) {
  const auto dist = mc_adf_null(250, AdfSpec{1}, 4000, 3);
  EXPECT_NEAR(dist.critical_value(0.05), -2.87, 0.1);
  EXPECT_TRUE(std::is_sorted(dist.stats.begin(), dist.stats.end()));
  EXPECT_NEAR(dist.p_value(dist.critical_value(0.05)), 0.05, 0.005);
  EXPECT_EQ(dist.p_value(-100.0), 0.0);
  EXPECT_EQ(dist.p_value(100.0), 1.0);
  EXPECT_THROW((void)mc_adf_null(250, AdfSpec{1}, 100, 3), ValidationError);
}
