#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "landbubble/csv.hpp"
#include "landbubble/error.hpp"
#include "landbubble/exuberance.hpp"
#include "landbubble/hedonic.hpp"
#include "landbubble/ingest.hpp"
#include "landbubble/io.hpp"
#include "landbubble/rng.hpp"
#include "landbubble/series.hpp"
#include "landbubble/synthkit.hpp"
#include "landbubble/var_granger.hpp"

namespace landbubble::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using csv::format_double;

namespace {

// ---------------------------------------------------------------------------
// small helpers

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string basename(const std::string& path) { return fs::path(path).filename().string(); }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

series::DiffMode diff_mode(const std::string& name) {
  if (name == "log") return series::DiffMode::log;
  if (name == "simple") return series::DiffMode::simple;
  throw UsageError("unknown differencing mode '" + name + "'");
}

TimeSeries transform(const TimeSeries& s, const std::string& diff) {
  return diff == "none" ? s : series::difference(s, diff_mode(diff));
}

void require_file(const std::string& path, const std::string& role) {
  if (path.empty()) throw UsageError("--" + role + " is required");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError(role + " file '" + path + "' does not exist");
}

class Writer {
 public:
  Writer(const CommonOptions& common, Console& console) : dir_(common.out_dir), console_(console) {}

  void operator()(const std::string& name, const std::string& text) {
    io::write_file(dir_ / name, text);
    written_.push_back(name);
    console_.log << "wrote " << (dir_ / name).string() << "\n";
  }

  [[nodiscard]] const std::vector<std::string>& written() const noexcept { return written_; }

 private:
  fs::path dir_;
  Console& console_;
  std::vector<std::string> written_;
};

const char* kSummaryHeader = "name,n,mean,std_dev,min,p5,median,p95,max,skewness,kurtosis\n";

std::string summary_row(const std::string& name, const series::SummaryStats& s) {
  return csv::escape(name) + "," + std::to_string(s.n) + "," + format_double(s.mean) + "," +
         opt_text(s.std_dev) + "," + format_double(s.min) + "," + format_double(s.p5) + "," +
         format_double(s.median) + "," + format_double(s.p95) + "," + format_double(s.max) + "," +
         opt_text(s.skewness) + "," + opt_text(s.kurtosis) + "\n";
}

json summary_json(const series::SummaryStats& s) {
  return {{"n", s.n},           {"mean", number(s.mean)}, {"std_dev", number(s.std_dev)},
          {"min", number(s.min)}, {"p5", number(s.p5)},     {"median", number(s.median)},
          {"p95", number(s.p95)}, {"max", number(s.max)},   {"skewness", number(s.skewness)},
          {"kurtosis", number(s.kurtosis)}};
}

// ---------------------------------------------------------------------------
// ingest stage

struct Ingested {
  ingest::Dataset dataset;
  ingest::FxTable fx;
  std::size_t n_input = 0;
};

Ingested run_ingest(const IngestOptions& options, Console& console) {
  require_file(options.prices, "prices");
  require_file(options.transactions, "transactions");
  Ingested out;
  out.fx = ingest::load_daily_prices(options.prices);
  ingest::SchemaConfig schema;
  schema.symbols = options.currencies;
  auto load = ingest::load_transactions(options.transactions, schema);
  ingest::FxOptions fx_options;
  fx_options.stable_passthrough = options.stable_passthrough;
  auto conv = ingest::to_usd(load.rows, out.fx, fx_options);
  auto rejected = load.rejected;
  rejected.insert(rejected.end(), conv.rejected.begin(), conv.rejected.end());
  out.n_input = load.n_input;
  out.dataset = ingest::prepare_dataset(std::move(conv.transactions), options.metaverse,
                                        options.winsor_lo, options.winsor_hi, std::move(rejected));
  console.log << "ingest: " << out.n_input << " rows, " << out.dataset.transactions.size()
              << " accepted, " << out.dataset.rejected.size() << " rejected, "
              << out.dataset.n_clamped << " prices winsorized\n";
  for (const auto& r : out.dataset.rejected) {
    console.log << "ingest: line " << r.line << " rejected: " << r.reason << "\n";
  }
  return out;
}

json ingest_json(const Ingested& in) {
  std::map<std::string, std::size_t> reasons;
  for (const auto& r : in.dataset.rejected) ++reasons[r.reason];
  json reason_counts = json::object();
  for (const auto& [reason, n] : reasons) reason_counts[reason] = n;
  return {{"metaverse", in.dataset.metaverse},
          {"n_input", in.n_input},
          {"accepted", in.dataset.transactions.size()},
          {"rejected", in.dataset.rejected.size()},
          {"rejection_reasons", reason_counts},
          {"coverage", {in.dataset.min_date.to_string(), in.dataset.max_date.to_string()}},
          {"winsor", {number(in.dataset.winsor_lo), number(in.dataset.winsor_hi)}},
          {"n_winsorized", in.dataset.n_clamped},
          {"weth_share", number(in.dataset.weth_share())},
          {"usd_price", summary_json(in.dataset.price_summary())}};
}

// ---------------------------------------------------------------------------
// hpi stage

struct HpiStage {
  hedonic::HpiResult result;
  TimeSeries index;
  std::vector<Date> missing;
  bool filled = false;
};

HpiStage run_hpi(const ingest::Dataset& dataset, Frequency freq, std::size_t min_per_period,
                 const std::string& fill, bool controls, Console& console) {
  hedonic::HedonicOptions options;
  options.min_per_period = min_per_period;
  options.control_log_plots = controls;
  options.control_weth = controls;
  HpiStage out;
  out.result = hedonic::build_hpi(dataset.transactions, freq, options);
  out.index = hedonic::hpi_to_series(out.result, "HPI");
  out.missing = out.index.missing_dates();
  for (const auto& g : out.result.gaps) {
    console.log << "hpi: gap period " << g.period.to_string() << " (" << g.n_transactions
                << " transactions, minimum " << min_per_period << ")\n";
  }
  if (!out.missing.empty()) {
    console.log << "hpi: " << out.missing.size() << " period(s) without an estimate";
    if (fill == "interpolate") {
      out.index = series::fill_gaps_log_linear(out.index);
      out.filled = true;
      console.log << ", filled by log-linear interpolation\n";
    } else {
      console.log << ", left missing (fill = none)\n";
    }
  }
  const auto& fit = out.result.fit;
  for (const auto* c : {&fit.log_num_plots, &fit.weth_flag}) {
    if (!c->identified) {
      console.log << "hpi: "
                  << (c == &fit.log_num_plots ? "log_num_plots" : "weth_flag")
                  << " has no within-period variation and is not estimated\n";
    }
  }
  return out;
}

json control_json(const hedonic::ControlEstimate& c) {
  if (!c.identified) return {{"identified", false}, {"coefficient", nullptr}, {"std_error", nullptr}};
  return {{"identified", true}, {"coefficient", number(c.coefficient)}, {"std_error", number(c.std_error)}};
}

json hpi_fit_json(const HpiStage& stage) {
  const auto& r = stage.result;
  json gaps = json::array();
  for (const auto& g : r.gaps) gaps.push_back({{"period", g.period.to_string()}, {"n_transactions", g.n_transactions}});
  json missing = json::array();
  for (Date d : stage.missing) missing.push_back(d.to_string());
  json errors = json::array();
  for (const auto& p : r.points) {
    errors.push_back({{"period", p.period.to_string()}, {"delta", number(p.delta)}, {"std_error", number(p.std_error)}});
  }
  return {{"freq", std::string(to_string(r.freq))},
          {"base_period", r.points.front().period.to_string()},
          {"n_periods", r.fit.n_periods},
          {"n_obs", r.fit.n_obs},
          {"rss", number(r.fit.rss)},
          {"df_resid", r.fit.df_resid},
          {"sigma2", number(r.fit.sigma2)},
          {"controls", {{"log_num_plots", control_json(r.fit.log_num_plots)},
                        {"weth_flag", control_json(r.fit.weth_flag)}}},
          {"gap_periods", gaps},
          {"missing_periods", missing},
          {"filled", stage.filled},
          {"deltas", errors}};
}

// ---------------------------------------------------------------------------
// bubble stage

exuberance::AdfSpec adf_spec(const BubbleSettings& s) {
  exuberance::AdfSpec spec;
  spec.n_lags = s.lags;
  spec.select_bic = s.bic;
  spec.max_lags = s.max_lags;
  return spec;
}

struct BubbleRun {
  std::string symbol;
  std::size_t T = 0;
  std::size_t r0 = 0;
  exuberance::DatestampResult stamp;
  const exuberance::CvTable* cv = nullptr;
};

class CvCache {
 public:
  CvCache(const BubbleSettings& settings, const CommonOptions& common)
      : settings_(settings), common_(common) {}

  const exuberance::CvTable& get(std::size_t T, std::size_t r0, Console& console) {
    const auto key = std::pair{T, r0};
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    std::vector<double> alphas{0.90, 0.95, 0.99};
    if (std::find(alphas.begin(), alphas.end(), settings_.level) == alphas.end()) {
      alphas.push_back(settings_.level);
      std::sort(alphas.begin(), alphas.end());
    }
    exuberance::McOptions mc;
    mc.threads = common_.threads;
    mc.method = settings_.naive ? exuberance::Method::naive : exuberance::Method::incremental;
    console.log << "bubble: simulating " << settings_.reps << " null paths (T = " << T
                << ", r0 = " << r0 << ")\n";
    auto table = exuberance::mc_critical_values(T, r0, adf_spec(settings_), alphas, settings_.reps,
                                                common_.seed, mc);
    return tables_.emplace(key, std::move(table)).first->second;
  }

 private:
  BubbleSettings settings_;
  CommonOptions common_;
  std::map<std::pair<std::size_t, std::size_t>, exuberance::CvTable> tables_;
};

BubbleRun run_bubble(const TimeSeries& s, const BubbleSettings& settings, CvCache& cache,
                     Console& console) {
  if (s.empty()) throw InsufficientDataError("bubble: series '" + s.name() + "' is empty");
  BubbleRun run;
  run.symbol = s.name();
  run.T = s.size();
  run.r0 = settings.r0 > 0 ? settings.r0 : exuberance::rule_of_thumb_window(s.size());
  const auto method = settings.naive ? exuberance::Method::naive : exuberance::Method::incremental;
  const auto points = exuberance::bsadf_series(s, run.r0, adf_spec(settings), method);
  run.cv = &cache.get(run.T, run.r0, console);
  run.stamp = exuberance::datestamp(points, *run.cv, settings.level);
  console.log << "bubble: " << run.symbol << " flagged " << run.stamp.flagged << " of "
              << run.stamp.evaluable << " dates in " << run.stamp.episodes.size() << " episode(s)\n";
  return run;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

void write_bubble(const BubbleRun& run, Writer& write) {
  const std::string tag = safe_name(run.symbol);
  write("bubble_" + tag + ".csv", io::bubble_csv(run.stamp));
  write("episodes_" + tag + ".csv", io::episodes_csv(run.stamp));
  write("cv_" + tag + ".csv", io::cv_table_csv(*run.cv));
}

std::string bubble_summary_csv(const std::vector<BubbleRun>& runs) {
  std::string out = "symbol,T,r0,evaluable,flagged,pct_flagged,episodes\n";
  for (const auto& r : runs) {
    out += csv::escape(r.symbol) + "," + std::to_string(r.T) + "," + std::to_string(r.r0) + "," +
           std::to_string(r.stamp.evaluable) + "," + std::to_string(r.stamp.flagged) + "," +
           format_double(r.stamp.pct_flagged) + "," + std::to_string(r.stamp.episodes.size()) + "\n";
  }
  return out;
}

json bubble_json(const BubbleRun& r) {
  json episodes = json::array();
  for (const auto& e : r.stamp.episodes) {
    episodes.push_back({{"start", e.start_date.to_string()}, {"end", e.end_date.to_string()},
                        {"length", e.length()}, {"peak_stat", number(e.peak_stat)}});
  }
  return {{"symbol", r.symbol},
          {"T", r.T},
          {"r0", r.r0},
          {"evaluable", r.stamp.evaluable},
          {"flagged", r.stamp.flagged},
          {"pct_flagged", number(r.stamp.pct_flagged)},
          {"episodes", episodes}};
}

// ---------------------------------------------------------------------------
// lead-lag stage

series::Correlogram run_leadlag(const TimeSeries& x, const TimeSeries& y, int max_lag) {
  auto gram = series::lead_lag_correlation(x, y, max_lag);
  for (const auto& e : gram.entries) {
    if (e.n_pairs < 3) {
      throw InsufficientDataError("leadlag: '" + x.name() + "' and '" + y.name() + "' overlap in " +
                                  std::to_string(e.n_pairs) + " dates at offset " +
                                  std::to_string(e.offset) + "; at least 3 needed");
    }
  }
  return gram;
}

json leadlag_json(const series::Correlogram& gram, const std::string& x, const std::string& y) {
  const auto best = gram.argmax();
  json entries = json::array();
  for (const auto& e : gram.entries) {
    entries.push_back({{"offset", e.offset}, {"corr", number(e.corr)}, {"n_pairs", e.n_pairs}});
  }
  return {{"x", x},
          {"y", y},
          {"max_lag", gram.max_lag},
          {"argmax", best ? json(*best) : json(nullptr)},
          {"corr_at_argmax", best ? number(gram.at(*best).corr) : json(nullptr)},
          {"entries", entries}};
}

// ---------------------------------------------------------------------------
// granger stage

struct GrangerStage {
  std::vector<TimeSeries> transformed;
  var::Panel panel;
  var::StationarityReport precheck;
  series::CorrelationMatrix correlations;
  std::vector<var::GrangerResult> table;
};

/// levels: effect candidate (land) first, cause candidate (crypto) second,
/// then optional controls.
GrangerStage run_granger(const std::vector<TimeSeries>& levels, const std::string& diff,
                         std::size_t p_max, std::size_t adf_reps, const CommonOptions& common,
                         Console& console) {
  GrangerStage out;
  for (const auto& s : levels) out.transformed.push_back(transform(s, diff));
  out.panel = var::Panel::align(out.transformed);
  console.log << "granger: panel of " << out.panel.rows() << " rows x " << out.panel.width()
              << " variables\n";
  var::PrecheckOptions pre;
  pre.n_rep = adf_reps;
  pre.seed = derive_seed(common.seed, 1);
  pre.threads = common.threads;
  out.precheck = var::stationarity_precheck(out.panel, pre);
  for (const auto& c : out.precheck.columns) {
    if (!c.error.empty()) {
      console.log << "granger: ADF pre-check for " << c.name << " failed: " << c.error << "\n";
    } else if (!c.stationary) {
      console.log << "granger: warning: unit root not rejected at 5% for " << c.name << "\n";
    }
  }
  std::vector<TimeSeries> aligned;
  for (const auto& name : out.panel.names()) aligned.push_back(out.panel.column(name));
  out.correlations = series::pairwise_correlation(aligned);
  const bool both = out.panel.width() >= 3;
  out.table = var::granger_table(out.panel, out.panel.names()[1], out.panel.names()[0], p_max, both);
  return out;
}

std::string panel_a_csv(const GrangerStage& g) {
  std::string out = "variable,n,mean,std_dev,min,median,max,adf_stat,adf_cv,adf_p_value,unit_root_rejected\n";
  for (std::size_t c = 0; c < g.panel.width(); ++c) {
    const auto col = g.panel.column(g.panel.names()[c]);
    const auto s = series::summary_stats(col.values());
    const auto& chk = g.precheck.columns[c];
    out += csv::escape(chk.name) + "," + std::to_string(s.n) + "," + format_double(s.mean) + "," +
           opt_text(s.std_dev) + "," + format_double(s.min) + "," + format_double(s.median) + "," +
           format_double(s.max) + "," + (chk.adf ? format_double(chk.adf->stat) : "") + "," +
           format_double(chk.critical_value) + "," + opt_text(chk.p_value) + "," +
           (chk.stationary ? "true" : "false") + "\n";
  }
  return out;
}

std::string panel_b_csv(const series::CorrelationMatrix& m) {
  std::string out = "variable";
  for (const auto& n : m.names) out += "," + csv::escape(n);
  out += "\n";
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out += csv::escape(m.names[i]);
    for (std::size_t j = 0; j < m.names.size(); ++j) out += "," + opt_text(m(i, j));
    out += "\n";
  }
  return out;
}

json granger_json(const GrangerStage& g) {
  json pre = json::array();
  for (const auto& c : g.precheck.columns) {
    pre.push_back({{"variable", c.name},
                   {"adf_stat", c.adf ? number(c.adf->stat) : json(nullptr)},
                   {"critical_value", number(c.critical_value)},
                   {"p_value", number(c.p_value)},
                   {"unit_root_rejected", c.stationary},
                   {"error", c.error.empty() ? json(nullptr) : json(c.error)}});
  }
  json corr = json::array();
  for (std::size_t i = 0; i < g.correlations.names.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.correlations.names.size(); ++j) row.push_back(number(g.correlations(i, j)));
    corr.push_back(row);
  }
  json rows = json::array();
  for (const auto& r : g.table) {
    rows.push_back({{"lag", r.p},
                    {"controls", r.controls_included},
                    {"direction", r.cause + "->" + r.effect},
                    {"f_stat", number(r.f_stat)},
                    {"p_value", number(r.p_value)},
                    {"df_num", r.df_num},
                    {"df_den", r.df_den},
                    {"n_obs", r.n_obs}});
  }
  return {{"variables", g.panel.names()},
          {"rows", g.panel.rows()},
          {"first_date", g.panel.dates().front().to_string()},
          {"last_date", g.panel.dates().back().to_string()},
          {"precheck", pre},
          {"correlations", corr},
          {"tests", rows}};
}

void write_granger(const GrangerStage& g, Writer& write) {
  write("granger.csv", io::granger_csv(g.table));
  write("panel_a.csv", panel_a_csv(g));
  write("panel_b.csv", panel_b_csv(g.correlations));
}

std::vector<TimeSeries> load_symbol_series(const ingest::FxTable& fx,
                                           const std::vector<std::string>& symbols) {
  std::vector<TimeSeries> out;
  for (const auto& sym : symbols.empty() ? fx.symbols() : symbols) out.push_back(fx.series(sym));
  return out;
}

TimeSeries to_frequency(const TimeSeries& s, Frequency freq) {
  if (s.freq() == freq) return s;
  if (freq == Frequency::daily) {
    throw ValidationError("series '" + s.name() + "' is weekly and cannot be made daily");
  }
  return series::resample(s, freq, series::ResampleRule::last).series;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

// ---------------------------------------------------------------------------

void cmd_summarize(const SummarizeOptions& o, Console& console) {
  const bool have_tx = !o.ingest.transactions.empty();
  if (o.series.empty() && o.ingest.prices.empty()) {
    throw UsageError("summarize: give --series and/or --prices (with --transactions for sales)");
  }
  const Frequency freq = parse_frequency(o.freq);
  std::vector<TimeSeries> inputs;
  for (const auto& path : o.series) inputs.push_back(io::read_series_csv(path, stem(path)));
  if (!o.ingest.prices.empty()) {
    require_file(o.ingest.prices, "prices");
    const auto fx = ingest::load_daily_prices(o.ingest.prices);
    for (auto& s : load_symbol_series(fx, o.symbols)) inputs.push_back(std::move(s));
  }
  std::string text = kSummaryHeader;
  for (const auto& s : inputs) {
    const auto t = transform(to_frequency(s, freq), o.diff);
    text += summary_row(t.name(), series::summary_stats(t.values()));
  }
  Writer write(o.common, console);
  if (have_tx) {
    const auto in = run_ingest(o.ingest, console);
    text += summary_row(in.dataset.metaverse + "_usd_price", in.dataset.price_summary());
    write("transactions_summary.json", dump(ingest_json(in)));
    write("rejections.csv", io::rejections_csv(in.dataset.rejected));
  }
  write("summary.csv", text);
  console.out << text;
}

void cmd_bubble(const BubbleOptions& o, Console& console) {
  if (o.prices.empty() && o.series.empty()) throw UsageError("bubble: give --prices or --series");
  const Frequency freq = parse_frequency(o.freq);
  std::vector<TimeSeries> inputs;
  if (!o.prices.empty()) {
    require_file(o.prices, "prices");
    inputs = load_symbol_series(ingest::load_daily_prices(o.prices), o.symbols);
  }
  for (const auto& path : o.series) inputs.push_back(io::read_series_csv(path, stem(path)));
  CvCache cache(o.bubble, o.common);
  Writer write(o.common, console);
  std::vector<BubbleRun> runs;
  for (const auto& raw : inputs) {
    TimeSeries s = to_frequency(raw, freq);
    if (!o.from.empty() || !o.to.empty()) {
      const Date from = o.from.empty() ? s.dates().front() : Date::parse(o.from);
      const Date to = o.to.empty() ? s.dates().back() : Date::parse(o.to);
      s = s.between(from, to);
    }
    runs.push_back(run_bubble(s, o.bubble, cache, console));
    write_bubble(runs.back(), write);
  }
  const auto summary = bubble_summary_csv(runs);
  write("bubble_summary.csv", summary);
  console.out << summary;
}

void cmd_hpi(const HpiOptions& o, Console& console) {
  const auto in = run_ingest(o.ingest, console);
  const auto stage = run_hpi(in.dataset, parse_frequency(o.freq), o.min_per_period, o.fill,
                             o.controls, console);
  Writer write(o.common, console);
  write("rejections.csv", io::rejections_csv(in.dataset.rejected));
  write("hpi.csv", io::hpi_csv(stage.result));
  if (stage.filled) write("hpi_filled.csv", io::series_csv(stage.index));
  write("hpi_fit.json", dump(hpi_fit_json(stage)));
  console.out << "hpi: " << stage.result.points.size() << " periods, base "
              << stage.result.points.front().period.to_string() << ", "
              << stage.result.gaps.size() << " gap period(s)\n";
}

void cmd_leadlag(const LeadLagOptions& o, Console& console) {
  require_file(o.x, "x");
  require_file(o.y, "y");
  const auto x = io::read_series_csv(o.x, o.x_name);
  const auto y = io::read_series_csv(o.y, o.y_name);
  const auto gram = run_leadlag(x, y, o.max_lag);
  Writer write(o.common, console);
  const auto text = io::correlogram_csv(gram);
  write("leadlag.csv", text);
  console.out << text;
}

void cmd_granger(const GrangerOptions& o, Console& console) {
  require_file(o.land, "land");
  require_file(o.crypto, "crypto");
  if (o.btc.empty() != o.eth.empty()) {
    throw UsageError("granger: the extended specification needs both --btc and --eth");
  }
  std::vector<TimeSeries> levels{io::read_series_csv(o.land, o.land_name),
                                 io::read_series_csv(o.crypto, o.crypto_name)};
  if (!o.btc.empty()) {
    require_file(o.btc, "btc");
    require_file(o.eth, "eth");
    levels.push_back(io::read_series_csv(o.btc, "BTC"));
    levels.push_back(io::read_series_csv(o.eth, "ETH"));
  }
  const auto stage = run_granger(levels, o.diff, o.p_max, o.adf_reps, o.common, console);
  Writer write(o.common, console);
  write_granger(stage, write);
  console.out << io::granger_csv(stage.table);
}

namespace {

std::vector<synth::Window> parse_windows(const std::string& text) {
  std::vector<synth::Window> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    const auto a = csv::parse_int(item.substr(0, colon));
    const auto b = colon == std::string::npos ? std::nullopt : csv::parse_int(item.substr(colon + 1));
    if (!a || !b || *a < 0 || *b < 0) throw UsageError("simulate: window '" + item + "' is not start:end");
    out.push_back({static_cast<std::size_t>(*a), static_cast<std::size_t>(*b)});
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = csv::parse_double(item);
    if (!v) throw UsageError("simulate: '" + item + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

void cmd_simulate(const SimulateOptions& o, Console& console) {
  synth::Layout layout;
  layout.start = Date::parse(o.start);
  layout.freq = parse_frequency(o.freq);
  Writer write(o.common, console);
  json truth = {{"kind", o.kind}, {"seed", o.common.seed}};
  if (o.kind == "random-walk") {
    const auto s = synth::gen_random_walk(o.T, o.drift, o.sigma, o.common.seed, layout);
    write("series.csv", io::series_csv(s));
    truth["T"] = o.T;
    truth["drift"] = o.drift;
    truth["sigma"] = o.sigma;
  } else if (o.kind == "explosive") {
    const auto windows = parse_windows(o.windows);
    const auto e = synth::gen_explosive(o.T, windows, o.rho, o.sigma, o.common.seed, o.initial, layout);
    write("series.csv", io::series_csv(e.series));
    std::string labels = "date,in_bubble\n";
    for (std::size_t t = 0; t < e.series.size(); ++t) {
      labels += e.series.date(t).to_string() + (e.in_bubble[t] ? ",1\n" : ",0\n");
    }
    write("truth_labels.csv", labels);
    json w = json::array();
    for (const auto& win : e.windows) {
      w.push_back({{"start", win.start}, {"end", win.end},
                   {"start_date", e.series.date(win.start).to_string()},
                   {"last_date", e.series.date(win.end - 1).to_string()}});
    }
    truth["T"] = o.T;
    truth["rho"] = o.rho;
    truth["sigma"] = o.sigma;
    truth["initial"] = o.initial;
    truth["windows"] = w;
  } else if (o.kind == "coupled") {
    const auto pair = synth::gen_coupled_pair(o.T, o.beta, o.lag, o.noise, o.common.seed, layout);
    write("x.csv", io::series_csv(pair.x));
    write("y.csv", io::series_csv(pair.y));
    truth["T"] = o.T;
    truth["beta"] = o.beta;
    truth["lag"] = o.lag;
    truth["noise"] = o.noise;
    truth["cause"] = "x";
    truth["effect"] = "y";
  } else if (o.kind == "hedonic") {
    const auto deltas = parse_list(o.deltas);
    synth::HedonicPanelOptions hp;
    hp.start = layout.start;
    hp.freq = parse_frequency(o.period_freq);
    const auto panel = synth::gen_hedonic_panel(deltas, o.n_per_period, o.beta_plots, o.beta_weth,
                                                o.noise, o.common.seed, hp);
    // wETH sales are written in WETH at a constant ETH quote, the rest in USD.
    constexpr double kEth = 2000.0;
    auto txs = panel.transactions;
    Date first = txs.front().date, last = txs.front().date;
    for (auto& tx : txs) {
      first = std::min(first, tx.date);
      last = std::max(last, tx.date);
      if (tx.paid_in_weth) {
        tx.native_currency = "WETH";
        tx.native_price = tx.usd_price / kEth;
      }
    }
    std::vector<synth::Quote> quotes;
    for (Date d = first; d <= last; d = d + 1) quotes.push_back({d, "ETH", kEth});
    write("transactions.csv", io::transactions_csv(txs));
    write("prices.csv", io::prices_csv(quotes));
    json periods = json::array();
    for (std::size_t p = 0; p < panel.periods.size(); ++p) {
      periods.push_back({{"period", panel.periods[p].to_string()}, {"delta", deltas[p]},
                         {"index", std::exp(deltas[p])}});
    }
    truth["freq"] = std::string(to_string(hp.freq));
    truth["n_per_period"] = o.n_per_period;
    truth["intercept"] = panel.intercept;
    truth["beta_plots"] = o.beta_plots;
    truth["beta_weth"] = o.beta_weth;
    truth["noise"] = o.noise;
    truth["periods"] = periods;
  } else if (o.kind == "market") {
    synth::MarketOptions po;
    po.start = layout.start;
    po.n_weeks = o.weeks;
    const auto data = synth::gen_market_dataset(o.common.seed, po);
    write("transactions.csv", data.transactions_csv());
    write("prices.csv", io::prices_csv(data.quotes));
    truth["weeks"] = o.weeks;
    truth["mana_bubble"] = {{"start", data.truth.bubble_start.to_string()},
                            {"end", data.truth.bubble_end.to_string()}};
    truth["hpi_loading"] = data.truth.hpi_loading;
    truth["hpi_lag_weeks"] = data.truth.hpi_lag_weeks;
    truth["n_outliers"] = data.truth.n_outliers;
    truth["n_malformed"] = data.truth.n_malformed;
  } else {
    throw UsageError("simulate: unknown --kind '" + o.kind + "'");
  }
  write("truth.json", dump(truth));
}

// ---------------------------------------------------------------------------
// pipeline

namespace {

std::map<std::string, std::string> canonical_config(const PipelineOptions& o) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  return {{"transactions", basename(o.ingest.transactions)},
          {"prices", basename(o.ingest.prices)},
          {"metaverse", o.ingest.metaverse},
          {"currencies", join(o.ingest.currencies, ",")},
          {"stable-passthrough", b(o.ingest.stable_passthrough)},
          {"winsor-lo", format_double(o.ingest.winsor_lo)},
          {"winsor-hi", format_double(o.ingest.winsor_hi)},
          {"crypto", o.crypto},
          {"btc", o.btc},
          {"eth", o.eth},
          {"freq", o.freq},
          {"diff", o.diff},
          {"fill", o.fill},
          {"min-per-period", std::to_string(o.min_per_period)},
          {"r0", std::to_string(o.bubble.r0)},
          {"lags", std::to_string(o.bubble.lags)},
          {"bic", b(o.bubble.bic)},
          {"max-lags", std::to_string(o.bubble.max_lags)},
          {"level", format_double(o.bubble.level)},
          {"reps", std::to_string(o.bubble.reps)},
          {"naive", b(o.bubble.naive)},
          {"p-max", std::to_string(o.p_max)},
          {"max-lag", std::to_string(o.max_lag)},
          {"adf-reps", std::to_string(o.adf_reps)},
          {"seed", std::to_string(o.common.seed)}};
}

int exit_code_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const UsageError&) {
    return 1;
  } catch (const DataError&) {
    return 2;
  } catch (const fs::filesystem_error&) {
    return 2;
  } catch (const NumericalError&) {
    return 3;
  } catch (...) {
    return 3;
  }
}

}  // namespace

int cmd_pipeline(const PipelineOptions& o, Console& console) {
  const auto config = canonical_config(o);
  std::string canonical;
  json config_json = json::object();
  for (const auto& [k, v] : config) {
    canonical += k + "=" + v + "\n";
    config_json[k] = v;
  }
  json report = {{"tool", "landbubble"},
                 {"status", "ok"},
                 {"seed", o.common.seed},
                 {"config_hash", "fnv1a64:" + hex64(fnv1a64(canonical))},
                 {"config", config_json},
                 {"inputs", json::array()}};
  Writer write(o.common, console);
  std::string stage = "inputs";
  int code = 0;
  try {
    require_file(o.ingest.transactions, "transactions");
    require_file(o.ingest.prices, "prices");
    for (const auto& [role, path] : {std::pair{"transactions", o.ingest.transactions},
                                     std::pair{"prices", o.ingest.prices}}) {
      const auto bytes = io::read_file(path);
      report["inputs"].push_back({{"role", role},
                                  {"file", basename(path)},
                                  {"bytes", bytes.size()},
                                  {"fnv1a64", hex64(fnv1a64(bytes))}});
    }
    const Frequency freq = parse_frequency(o.freq);

    stage = "ingest";
    const auto in = run_ingest(o.ingest, console);
    report["ingest"] = ingest_json(in);
    write("rejections.csv", io::rejections_csv(in.dataset.rejected));

    stage = "hpi";
    const auto hpi = run_hpi(in.dataset, freq, o.min_per_period, o.fill, true, console);
    report["hpi"] = hpi_fit_json(hpi);
    write("hpi.csv", io::hpi_csv(hpi.result));
    write("hpi_fit.json", dump(report["hpi"]));

    stage = "resample";
    std::vector<TimeSeries> daily;
    std::vector<TimeSeries> levels{hpi.index};
    for (const auto& sym : {o.crypto, o.btc, o.eth}) {
      if (sym.empty()) continue;
      daily.push_back(in.fx.series(sym));
      levels.push_back(to_frequency(daily.back(), freq));
    }
    for (const auto& s : levels) write("series_" + safe_name(s.name()) + ".csv", io::series_csv(s));

    stage = "bubble";
    CvCache cache(o.bubble, o.common);
    std::vector<BubbleRun> runs;
    report["bubble"] = json::array();
    for (const auto& s : daily) {
      runs.push_back(run_bubble(s, o.bubble, cache, console));
      write_bubble(runs.back(), write);
      report["bubble"].push_back(bubble_json(runs.back()));
    }
    write("bubble_summary.csv", bubble_summary_csv(runs));

    stage = "leadlag";
    const auto gram = run_leadlag(levels[1], levels[0], o.max_lag);
    write("leadlag.csv", io::correlogram_csv(gram));
    report["leadlag"] = leadlag_json(gram, levels[1].name(), levels[0].name());

    stage = "granger";
    if (levels.size() == 3) levels.pop_back();
    const auto g = run_granger(levels, o.diff, o.p_max, o.adf_reps, o.common, console);
    write_granger(g, write);
    report["granger"] = granger_json(g);
  } catch (...) {
    code = exit_code_of(std::current_exception());
    std::string message;
    try {
      throw;
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
      message = "unknown error";
    }
    report["status"] = "partial";
    report["failed_stage"] = stage;
    report["exit_code"] = code;
    report["error"] = message;
    console.log << "pipeline: stage '" << stage << "' failed: " << message << "\n";
  }
  auto outputs = write.written();
  outputs.push_back("report.json");
  report["outputs"] = outputs;
  write("report.json", dump(report));
  console.out << "pipeline: " << report["status"].get<std::string>() << "\n";
  return code;
}

}  // namespace landbubble::app
