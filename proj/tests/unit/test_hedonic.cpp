#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "designs.hpp"
#include "landbubble/error.hpp"
#include "landbubble/hedonic.hpp"
#include "landbubble/rng.hpp"
#include "landbubble/series.hpp"
#include "landbubble/synthkit.hpp"

using namespace landbubble;
using namespace landbubble::hedonic;

namespace {

Transaction sale(Date d, double price, int plots = 1, bool weth = false) {
  Transaction t;
  t.date = d;
  t.usd_price = price;
  t.num_plots = plots;
  t.paid_in_weth = weth;
  t.native_currency = "USD";
  t.native_price = price;
  return t;
}

void expect_matches_oracle(const std::vector<Transaction>& txs, const HpiResult& r,
                           std::size_t min_per_period = 3) {
  const auto o = oracle::dummy_hpi(txs, r.freq == Frequency::weekly, min_per_period,
                                   r.fit.log_num_plots.identified, r.fit.weth_flag.identified);
  ASSERT_EQ(o.periods.size(), r.points.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    EXPECT_EQ(r.points[i].period.days_since_epoch(), o.periods[i]);
    EXPECT_NEAR(r.points[i].delta, static_cast<double>(o.delta[i]), 1e-9);
    EXPECT_NEAR(r.points[i].std_error, static_cast<double>(o.delta_se[i]), 1e-9);
  }
  if (r.fit.log_num_plots.identified) {
    EXPECT_NEAR(r.fit.log_num_plots.coefficient, static_cast<double>(o.beta_plots), 1e-9);
    EXPECT_NEAR(r.fit.log_num_plots.std_error, static_cast<double>(o.se_plots), 1e-9);
  }
  if (r.fit.weth_flag.identified) {
    EXPECT_NEAR(r.fit.weth_flag.coefficient, static_cast<double>(o.beta_weth), 1e-9);
    EXPECT_NEAR(r.fit.weth_flag.std_error, static_cast<double>(o.se_weth), 1e-9);
  }
  EXPECT_NEAR(r.fit.rss, static_cast<double>(o.rss), 1e-9);
  EXPECT_EQ(r.fit.df_resid, o.df);
}

}  // namespace

TEST(Buckets, SameDayIsOneWeeklyBucket) {
  const Date d(2021, 3, 10);
  const std::vector<Transaction> txs{sale(d, 1), sale(d, 2), sale(d, 3)};
  const auto b = bucket_periods(txs, Frequency::weekly);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.begin()->first, Date(2021, 3, 8));
  EXPECT_EQ(b.begin()->second.size(), 3u);
}

TEST(Buckets, ConsecutiveMondaysAreDistinct) {
  const std::vector<Transaction> txs{sale(Date(2021, 3, 8), 1), sale(Date(2021, 3, 15), 1)};
  EXPECT_EQ(bucket_periods(txs, Frequency::weekly).size(), 2u);
  const std::vector<Transaction> sunday{sale(Date(2021, 3, 14), 1), sale(Date(2021, 3, 8), 1)};
  EXPECT_EQ(bucket_periods(sunday, Frequency::weekly).size(), 1u);
}

TEST(Buckets, MatchCalendarOracle) {
  Rng rng(3);
  std::vector<Transaction> txs;
  for (int i = 0; i < 100; ++i) {
    txs.push_back(sale(Date(2021, 1, 1) + static_cast<std::int32_t>(rng.uniform_int(0, 120)), 1));
  }
  for (auto freq : {Frequency::weekly, Frequency::daily}) {
    std::map<long, std::size_t> want;
    for (const auto& t : txs) {
      const long d = t.date.days_since_epoch();
      ++want[freq == Frequency::weekly ? oracle::iso_monday(d) : d];
    }
    const auto got = bucket_periods(txs, freq);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [period, list] : got) EXPECT_EQ(list.size(), want.at(period.days_since_epoch()));
  }
}

TEST(BuildHpi, NoiselessDoubling) {
  std::vector<Transaction> txs;
  for (double p : {100.0, 250.0, 40.0}) {
    txs.push_back(sale(Date(2021, 1, 5), p));
    txs.push_back(sale(Date(2021, 1, 13), 2.0 * p));
  }
  const auto r = build_hpi(txs, Frequency::weekly);
  ASSERT_EQ(r.points.size(), 2u);
  EXPECT_EQ(r.points[0].index, 1.0);
  EXPECT_NEAR(r.points[1].index, 2.0, 1e-12);
  EXPECT_FALSE(r.fit.log_num_plots.identified);
  EXPECT_FALSE(r.fit.weth_flag.identified);
  EXPECT_EQ(r.fit.df_resid, 4u);
}

TEST(BuildHpi, OnePeriodIsInsufficient) {
  const Date d(2021, 1, 5);
  const std::vector<Transaction> txs{sale(d, 1), sale(d, 2), sale(d, 3), sale(d, 4)};
  EXPECT_THROW((void)build_hpi(txs, Frequency::weekly), InsufficientDataError);
}

TEST(BuildHpi, RejectsInvalidTransactions) {
  const Date d(2021, 1, 5);
  std::vector<Transaction> txs{sale(d, 1), sale(d, 2), sale(d + 7, 0.0), sale(d + 7, 4)};
  EXPECT_THROW((void)build_hpi(txs, Frequency::weekly), ValidationError);
  txs[2].usd_price = 3.0;
  txs[2].num_plots = 0;
  EXPECT_THROW((void)build_hpi(txs, Frequency::weekly), ValidationError);
}

TEST(BuildHpi, NoiselessPanelRecoveredExactly) {
  const std::vector<double> deltas{0.0, 0.3, -0.2, 0.55, 0.1};
  const auto panel = synth::gen_hedonic_panel(deltas, 50, 0.9, -0.1, 0.0, 4);
  const auto r = build_hpi(panel.transactions, Frequency::weekly);
  ASSERT_EQ(r.points.size(), deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    EXPECT_NEAR(r.points[i].index, std::exp(deltas[i]), 1e-10);
    EXPECT_EQ(r.points[i].period, panel.periods[i]);
  }
  EXPECT_NEAR(r.fit.log_num_plots.coefficient, 0.9, 1e-10);
  EXPECT_NEAR(r.fit.weth_flag.coefficient, -0.1, 1e-10);
}

TEST(BuildHpi, FlatDeltasGiveFlatIndex) {
  const std::vector<double> deltas(4, 0.0);
  const auto panel = synth::gen_hedonic_panel(deltas, 20, 0.9, -0.1, 0.0, 5);
  const auto r = build_hpi(panel.transactions, Frequency::weekly);
  for (const auto& p : r.points) EXPECT_NEAR(p.index, 1.0, 1e-10);
}

TEST(BuildHpi, PlantedRecoveryWithinThreeStandardErrors) {
  const std::vector<double> deltas{0.0, 0.3, -0.2};
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto panel = synth::gen_hedonic_panel(deltas, 200, 0.9, -0.1, 0.05, seed);
    const auto r = build_hpi(panel.transactions, Frequency::weekly);
    bool ok = true;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      ok &= std::abs(r.points[i].delta - deltas[i]) <= 3.0 * r.points[i].std_error;
    }
    covered += ok;
    expect_matches_oracle(panel.transactions, r);
  }
  EXPECT_GE(covered, 18);
}

TEST(BuildHpi, DailyFrequencyMatchesOracle) {
  const std::vector<double> deltas{0.0, 0.05, 0.1, -0.02, 0.2, 0.3, 0.25};
  synth::HedonicPanelOptions opt;
  opt.freq = Frequency::daily;
  const auto panel = synth::gen_hedonic_panel(deltas, 12, 0.8, 0.05, 0.1, 6, opt);
  const auto r = build_hpi(panel.transactions, Frequency::daily);
  EXPECT_EQ(r.points.size(), 7u);
  expect_matches_oracle(panel.transactions, r);
}

TEST(BuildHpi, CurrencyUnitInvariance) {
  const std::vector<double> deltas{0.0, 0.4, 0.1};
  auto panel = synth::gen_hedonic_panel(deltas, 60, 0.9, -0.1, 0.2, 7);
  const auto a = build_hpi(panel.transactions, Frequency::weekly);
  for (auto& t : panel.transactions) t.usd_price *= 1234.5;
  const auto b = build_hpi(panel.transactions, Frequency::weekly);
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_NEAR(a.points[i].index, b.points[i].index, 1e-10);
  EXPECT_NEAR(a.fit.log_num_plots.coefficient, b.fit.log_num_plots.coefficient, 1e-10);
}

TEST(BuildHpi, ControlEfficacyMatchesOracleRefit) {
  const std::vector<double> deltas{0.0, 0.2, 0.1};
  auto panel = synth::gen_hedonic_panel(deltas, 80, 0.9, -0.1, 0.1, 8);
  const auto before = build_hpi(panel.transactions, Frequency::weekly);
  for (auto& t : panel.transactions) {
    if (period_of(t.date, Frequency::weekly) == panel.periods[1]) t.num_plots *= 2;
  }
  const auto after = build_hpi(panel.transactions, Frequency::weekly);
  expect_matches_oracle(panel.transactions, after);
  // Same prices, bigger lots: the period looks cheaper once size is controlled.
  EXPECT_LT(after.points[1].index, before.points[1].index);
  EXPECT_NEAR(after.points[2].index, before.points[2].index, 0.05);
}

TEST(BuildHpi, WithoutControlsIsGeometricMeanRatio) {
  // Identical composition in both periods: plots 1,2,3 and one wETH sale.
  std::vector<Transaction> txs;
  const double p1[] = {10, 22, 35, 14};
  const double p2[] = {13, 30, 41, 19};
  for (int i = 0; i < 4; ++i) {
    txs.push_back(sale(Date(2021, 2, 1), p1[i], i % 3 + 1, i == 3));
    txs.push_back(sale(Date(2021, 2, 9), p2[i], i % 3 + 1, i == 3));
  }
  HedonicOptions opt;
  opt.control_log_plots = false;
  opt.control_weth = false;
  const auto r = build_hpi(txs, Frequency::weekly, opt);
  double g1 = 0, g2 = 0;
  for (int i = 0; i < 4; ++i) {
    g1 += std::log(p1[i]) / 4;
    g2 += std::log(p2[i]) / 4;
  }
  EXPECT_NEAR(r.points[1].index, std::exp(g2 - g1), 1e-9);
  const auto with = build_hpi(txs, Frequency::weekly);
  expect_matches_oracle(txs, with);
}

TEST(BuildHpi, ThinPeriodsBecomeGaps) {
  const std::vector<double> deltas{0.0, 0.1, 0.2, 0.3};
  auto panel = synth::gen_hedonic_panel(deltas, 10, 0.9, -0.1, 0.1, 9);
  // Keep only two sales of the third week.
  std::vector<Transaction> kept;
  std::size_t third = 0;
  for (const auto& t : panel.transactions) {
    if (period_of(t.date, Frequency::weekly) == panel.periods[2] && third++ >= 2) continue;
    kept.push_back(t);
  }
  const auto r = build_hpi(kept, Frequency::weekly);
  ASSERT_EQ(r.gaps.size(), 1u);
  EXPECT_EQ(r.gaps[0].period, panel.periods[2]);
  EXPECT_EQ(r.gaps[0].n_transactions, 2u);
  ASSERT_EQ(r.points.size(), 3u);
  expect_matches_oracle(kept, r);

  const auto s = hpi_to_series(r);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.has_gaps());
  EXPECT_EQ(s.missing_dates(), std::vector<Date>{panel.periods[2]});
  EXPECT_THROW((void)series::difference(s, series::DiffMode::log), GapError);
  const auto filled = series::fill_gaps_log_linear(s);
  EXPECT_EQ(series::difference(filled, series::DiffMode::log).size(), 3u);
}

TEST(BuildHpi, BaseIsFirstEstimablePeriod) {
  const std::vector<double> deltas{0.0, 0.1, 0.2};
  auto panel = synth::gen_hedonic_panel(deltas, 10, 0.9, -0.1, 0.1, 10);
  std::vector<Transaction> kept;
  std::size_t first = 0;
  for (const auto& t : panel.transactions) {
    if (period_of(t.date, Frequency::weekly) == panel.periods[0] && first++ >= 1) continue;
    kept.push_back(t);
  }
  const auto r = build_hpi(kept, Frequency::weekly);
  EXPECT_EQ(r.points[0].period, panel.periods[1]);
  EXPECT_EQ(r.points[0].index, 1.0);
  EXPECT_EQ(r.points[0].delta, 0.0);
}

TEST(BuildHpi, CollinearControlsAreSingular) {
  std::vector<Transaction> txs;
  for (int w = 0; w < 3; ++w) {
    for (int i = 0; i < 4; ++i) {
      const bool big = i % 2 == 1;
      txs.push_back(sale(Date(2021, 2, 1) + 7 * w, 10.0 + i + w, big ? 4 : 1, big));
    }
  }
  try {
    (void)build_hpi(txs, Frequency::weekly);
    FAIL();
  } catch (const SingularDesignError& e) {
    EXPECT_FALSE(e.columns().empty());
  }
}

TEST(HpiSeries, SingleAndPairPoints) {
  const std::vector<HpiPoint> one{{Date(2021, 1, 4), 1.0, 0.0, 0.0, 5}};
  const auto s1 = hpi_to_series(one, Frequency::weekly);
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(s1.value(0), 1.0);
  const std::vector<HpiPoint> two{{Date(2021, 1, 4), 1.0, 0.0, 0.0, 5},
                                  {Date(2021, 1, 11), 2.0, std::log(2.0), 0.1, 5}};
  const auto s2 = hpi_to_series(two, Frequency::weekly, "LAND");
  EXPECT_EQ(s2.size(), 2u);
  EXPECT_EQ(s2.name(), "LAND");
  EXPECT_EQ(s2.value(1), 2.0);
}
