#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace landbubble::app {

struct CommonOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 20240101;
  /// 0 = all hardware threads. Results do not depend on it.
  unsigned threads = 0;
};

struct IngestOptions {
  std::string transactions;
  std::string prices;
  std::string metaverse = "decentraland";
  /// Accepted settlement currencies; empty accepts any.
  std::vector<std::string> currencies;
  bool stable_passthrough = true;
  double winsor_lo = 0.001;
  double winsor_hi = 0.999;
};

struct BubbleSettings {
  std::size_t r0 = 0;  ///< 0 = rule-of-thumb minimum window
  std::size_t lags = 1;
  bool bic = false;
  std::size_t max_lags = 4;
  double level = 0.95;
  std::size_t reps = 1000;
  bool naive = false;
};

struct SummarizeOptions {
  CommonOptions common;
  std::vector<std::string> series;
  IngestOptions ingest;
  std::vector<std::string> symbols;
  std::string freq = "daily";
  std::string diff = "none";
};

struct BubbleOptions {
  CommonOptions common;
  std::string prices;
  std::vector<std::string> series;
  std::vector<std::string> symbols;
  std::string freq = "daily";
  std::string from;
  std::string to;
  BubbleSettings bubble;
};

struct HpiOptions {
  CommonOptions common;
  IngestOptions ingest;
  std::string freq = "weekly";
  std::size_t min_per_period = 3;
  std::string fill = "none";
  bool controls = true;
};

struct LeadLagOptions {
  CommonOptions common;
  std::string x;
  std::string y;
  std::string x_name = "x";
  std::string y_name = "y";
  int max_lag = 10;
};

struct GrangerOptions {
  CommonOptions common;
  std::string land;
  std::string crypto;
  std::string btc;
  std::string eth;
  std::string land_name = "LAND";
  std::string crypto_name = "CRYPTO";
  std::size_t p_max = 3;
  std::string diff = "log";
  std::size_t adf_reps = 2000;
};

struct SimulateOptions {
  CommonOptions common;
  std::string kind = "random-walk";
  std::size_t T = 300;
  std::string start = "2021-01-04";
  std::string freq = "daily";
  double drift = 0.0;
  double sigma = 1.0;
  double rho = 1.06;
  std::string windows;
  double initial = 0.0;
  double beta = 0.6;
  std::size_t lag = 1;
  double noise = 1.0;
  std::string deltas = "0,0.3,-0.2";
  std::string period_freq = "weekly";
  std::size_t n_per_period = 200;
  double beta_plots = 0.9;
  double beta_weth = -0.1;
  std::size_t weeks = 84;
};

struct PipelineOptions {
  CommonOptions common;
  IngestOptions ingest;
  std::string crypto = "MANA";
  std::string btc = "BTC";
  std::string eth = "ETH";
  std::string freq = "weekly";
  std::string diff = "log";
  std::string fill = "none";
  std::size_t min_per_period = 3;
  BubbleSettings bubble;
  std::size_t p_max = 3;
  int max_lag = 10;
  std::size_t adf_reps = 2000;
};

/// Where commands report progress. Output files never depend on it.
struct Console {
  std::ostream& out;
  std::ostream& log;
};

void cmd_summarize(const SummarizeOptions& options, Console& console);
void cmd_bubble(const BubbleOptions& options, Console& console);
void cmd_hpi(const HpiOptions& options, Console& console);
void cmd_leadlag(const LeadLagOptions& options, Console& console);
void cmd_granger(const GrangerOptions& options, Console& console);
void cmd_simulate(const SimulateOptions& options, Console& console);
/// Returns the exit code of the first failing stage (0 on success); the
/// report is written in either case.
int cmd_pipeline(const PipelineOptions& options, Console& console);

}  // namespace landbubble::app
