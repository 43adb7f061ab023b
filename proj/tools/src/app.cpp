#include "app.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "landbubble/error.hpp"
#include "landbubble/io.hpp"

namespace landbubble::app {

namespace {

const CLI::IsMember kFreq({"daily", "weekly"});
const CLI::IsMember kDiff({"log", "simple", "none"});
const CLI::IsMember kFill({"none", "interpolate"});

void add_common(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

void add_ingest(CLI::App* sub, IngestOptions& o, bool with_transactions) {
  if (with_transactions) {
    sub->add_option("--transactions", o.transactions,
                    "Transactions CSV (timestamp,native_price,currency,num_plots,tx_id)");
    sub->add_option("--metaverse", o.metaverse, "Label of the metaverse")->capture_default_str();
    sub->add_option("--currencies", o.currencies, "Accepted settlement currencies (default: any)")
        ->delimiter(',');
    sub->add_option("--stable-passthrough", o.stable_passthrough,
                    "Value USD, USDC, USDT and DAI at 1.0 without a quote")
        ->capture_default_str();
    sub->add_option("--winsor-lo", o.winsor_lo, "Lower winsorization quantile")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    sub->add_option("--winsor-hi", o.winsor_hi, "Upper winsorization quantile")
        ->check(CLI::Range(0.5, 1.0))
        ->capture_default_str();
  }
  sub->add_option("--prices", o.prices, "Daily prices CSV (date,symbol,usd_price)");
}

void add_bubble(CLI::App* sub, BubbleSettings& b) {
  sub->add_option("--r0", b.r0, "Minimum window (0 = ceil(T(0.01 + 1.8/sqrt T)))")->capture_default_str();
  sub->add_option("--lags", b.lags, "ADF lag order")->capture_default_str();
  sub->add_flag("--bic", b.bic, "Select the lag order per window by BIC");
  sub->add_option("--max-lags", b.max_lags, "Largest lag order considered by --bic")->capture_default_str();
  sub->add_option("--level", b.level, "Critical-value quantile used for flagging")
      ->check(CLI::Range(0.5, 0.9999))
      ->capture_default_str();
  sub->add_option("--reps", b.reps, "Monte-Carlo replications")
      ->check(CLI::Range(200, 1000000))
      ->capture_default_str();
  sub->add_flag("--naive", b.naive, "Refit every window from scratch");
}

int exit_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  SummarizeOptions summarize;
  BubbleOptions bubble;
  HpiOptions hpi;
  LeadLagOptions leadlag;
  GrangerOptions granger;
  SimulateOptions simulate;
  PipelineOptions pipeline;

  CLI::App app{"Metaverse land price bubbles: hedonic indices, BSADF date-stamping and "
               "lead-lag / Granger analysis"};
  app.name("landbubble");
  app.require_subcommand(1);
  app.footer(
      "Every subcommand accepts --config FILE: a flat 'key = value' file whose keys are the\n"
      "long flag names without dashes. Flags given on the command line win.\n"
      "Exit codes: 0 ok, 1 usage, 2 data validation, 3 numerical failure.");

  auto* s_sum = app.add_subcommand("summarize", "Summary statistics of series, prices and sales");
  add_common(s_sum, summarize.common);
  add_ingest(s_sum, summarize.ingest, true);
  s_sum->add_option("--series", summarize.series, "Series CSV (date,value); repeatable");
  s_sum->add_option("--symbols", summarize.symbols, "Symbols of the prices file (default: all)")
      ->delimiter(',');
  s_sum->add_option("--freq", summarize.freq, "Target frequency")->check(kFreq)->capture_default_str();
  s_sum->add_option("--diff", summarize.diff, "Differencing before summarizing")
      ->check(kDiff)
      ->capture_default_str();

  auto* s_bub = app.add_subcommand("bubble", "BSADF date-stamping with Monte-Carlo critical values");
  add_common(s_bub, bubble.common);
  s_bub->add_option("--prices", bubble.prices, "Daily prices CSV (date,symbol,usd_price)");
  s_bub->add_option("--series", bubble.series, "Series CSV (date,value); repeatable");
  s_bub->add_option("--symbols", bubble.symbols, "Symbols of the prices file (default: all)")
      ->delimiter(',');
  s_bub->add_option("--freq", bubble.freq, "Sampling frequency")->check(kFreq)->capture_default_str();
  s_bub->add_option("--from", bubble.from, "First date (YYYY-MM-DD)");
  s_bub->add_option("--to", bubble.to, "Last date (YYYY-MM-DD)");
  add_bubble(s_bub, bubble.bubble);

  auto* s_hpi = app.add_subcommand("hpi", "Time-dummy hedonic price index");
  add_common(s_hpi, hpi.common);
  add_ingest(s_hpi, hpi.ingest, true);
  s_hpi->add_option("--freq", hpi.freq, "Index period")->check(kFreq)->capture_default_str();
  s_hpi->add_option("--min-per-period", hpi.min_per_period, "Fewest sales for an estimated period")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  s_hpi->add_option("--fill", hpi.fill, "Treatment of periods without an estimate")
      ->check(kFill)
      ->capture_default_str();
  s_hpi->add_option("--controls", hpi.controls, "Include ln(plots) and the wETH indicator")
      ->capture_default_str();

  auto* s_ll = app.add_subcommand("leadlag", "Lead-lag correlogram of two level series");
  add_common(s_ll, leadlag.common);
  s_ll->add_option("--x", leadlag.x, "Leader candidate series CSV")->required();
  s_ll->add_option("--y", leadlag.y, "Follower candidate series CSV")->required();
  s_ll->add_option("--x-name", leadlag.x_name)->capture_default_str();
  s_ll->add_option("--y-name", leadlag.y_name)->capture_default_str();
  s_ll->add_option("--max-lag", leadlag.max_lag, "Largest offset K")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();

  auto* s_gr = app.add_subcommand("granger", "VAR Granger-causality tables");
  add_common(s_gr, granger.common);
  s_gr->add_option("--land", granger.land, "Land index level series CSV")->required();
  s_gr->add_option("--crypto", granger.crypto, "Cryptocurrency level series CSV")->required();
  s_gr->add_option("--btc", granger.btc, "BTC level series CSV (extended specification)");
  s_gr->add_option("--eth", granger.eth, "ETH level series CSV (extended specification)");
  s_gr->add_option("--land-name", granger.land_name)->capture_default_str();
  s_gr->add_option("--crypto-name", granger.crypto_name)->capture_default_str();
  s_gr->add_option("--p-max", granger.p_max, "Largest lag order")
      ->check(CLI::Range(1, 52))
      ->capture_default_str();
  s_gr->add_option("--diff", granger.diff, "Differencing of the levels")->check(kDiff)->capture_default_str();
  s_gr->add_option("--adf-reps", granger.adf_reps, "Replications for the ADF pre-check")
      ->check(CLI::Range(200, 1000000))
      ->capture_default_str();

  auto* s_sim = app.add_subcommand("simulate", "Write seeded synthetic fixtures with truth labels");
  add_common(s_sim, simulate.common);
  s_sim->add_option("--kind", simulate.kind)
      ->check(CLI::IsMember({"random-walk", "explosive", "coupled", "hedonic", "market"}))
      ->capture_default_str();
  s_sim->add_option("--T", simulate.T, "Series length")->capture_default_str();
  s_sim->add_option("--start", simulate.start, "First date")->capture_default_str();
  s_sim->add_option("--freq", simulate.freq, "Series frequency")->check(kFreq)->capture_default_str();
  s_sim->add_option("--drift", simulate.drift)->capture_default_str();
  s_sim->add_option("--sigma", simulate.sigma)->capture_default_str();
  s_sim->add_option("--rho", simulate.rho)->capture_default_str();
  s_sim->add_option("--windows", simulate.windows, "Explosive windows start:end[,start:end...]");
  s_sim->add_option("--initial", simulate.initial, "Initial level of explosive paths")->capture_default_str();
  s_sim->add_option("--beta", simulate.beta)->capture_default_str();
  s_sim->add_option("--lag", simulate.lag)->capture_default_str();
  s_sim->add_option("--noise", simulate.noise)->capture_default_str();
  s_sim->add_option("--deltas", simulate.deltas, "Period effects of the hedonic panel")
      ->capture_default_str();
  s_sim->add_option("--period-freq", simulate.period_freq)->check(kFreq)->capture_default_str();
  s_sim->add_option("--n-per-period", simulate.n_per_period)->capture_default_str();
  s_sim->add_option("--beta-plots", simulate.beta_plots)->capture_default_str();
  s_sim->add_option("--beta-weth", simulate.beta_weth)->capture_default_str();
  s_sim->add_option("--weeks", simulate.weeks, "Length of the market dataset")->capture_default_str();

  auto* s_pipe = app.add_subcommand("pipeline", "ingest -> hpi -> bubble -> leadlag -> granger");
  add_common(s_pipe, pipeline.common);
  add_ingest(s_pipe, pipeline.ingest, true);
  s_pipe->add_option("--crypto", pipeline.crypto, "Metaverse token symbol")->capture_default_str();
  s_pipe->add_option("--btc", pipeline.btc, "BTC symbol (empty to drop)")->capture_default_str();
  s_pipe->add_option("--eth", pipeline.eth, "ETH symbol (empty to drop)")->capture_default_str();
  s_pipe->add_option("--freq", pipeline.freq)->check(kFreq)->capture_default_str();
  s_pipe->add_option("--diff", pipeline.diff)->check(kDiff)->capture_default_str();
  s_pipe->add_option("--fill", pipeline.fill)->check(kFill)->capture_default_str();
  s_pipe->add_option("--min-per-period", pipeline.min_per_period)
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  add_bubble(s_pipe, pipeline.bubble);
  s_pipe->add_option("--p-max", pipeline.p_max)->check(CLI::Range(1, 52))->capture_default_str();
  s_pipe->add_option("--max-lag", pipeline.max_lag)->check(CLI::Range(0, 1000))->capture_default_str();
  s_pipe->add_option("--adf-reps", pipeline.adf_reps)
      ->check(CLI::Range(200, 1000000))
      ->capture_default_str();

  try {
    const std::string config_path = extract_config_path(args);
    if (!config_path.empty()) {
      std::string text;
      try {
        text = io::read_file(config_path);
      } catch (const DataError& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      merge_config(args, parse_config(text, config_path));
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e, out, err);
    return 1;
  }

  Console console{out, err};
  try {
    if (s_sum->parsed()) cmd_summarize(summarize, console);
    if (s_bub->parsed()) cmd_bubble(bubble, console);
    if (s_hpi->parsed()) cmd_hpi(hpi, console);
    if (s_ll->parsed()) cmd_leadlag(leadlag, console);
    if (s_gr->parsed()) cmd_granger(granger, console);
    if (s_sim->parsed()) cmd_simulate(simulate, console);
    if (s_pipe->parsed()) return cmd_pipeline(pipeline, console);
  } catch (...) {
    return exit_for_current_exception(err);
  }
  return 0;
}

}  // namespace landbubble::app
