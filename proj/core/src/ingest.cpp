#include "landbubble/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "landbubble/csv.hpp"
#include "landbubble/error.hpp"

namespace landbubble::ingest {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError(path.string() + ": no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  return in;
}

bool contains(const std::vector<std::string>& set, const std::string& label) {
  return std::find(set.begin(), set.end(), label) != set.end();
}

}  // namespace

TransactionLoad parse_transactions(std::istream& in, const SchemaConfig& schema,
                                   const std::string& source) {
  csv::Reader reader(in, source);
  const auto width = reader.read_header().size();
  const std::size_t c_ts = reader.column(schema.timestamp);
  const std::size_t c_price = reader.column(schema.native_price);
  const std::size_t c_cur = reader.column(schema.currency);
  const std::size_t c_plots = reader.column(schema.num_plots);
  const std::size_t c_id = reader.column(schema.tx_id);

  TransactionLoad out;
  while (auto rec = reader.next()) {
    ++out.n_input;
    auto reject = [&](std::string reason) { out.rejected.push_back({rec->line, std::move(reason)}); };
    if (!rec->fields) {
      reject("unterminated quote");
      continue;
    }
    const auto& f = *rec->fields;
    if (f.size() != width) {
      reject("expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
      continue;
    }
    RawTransactionRow row;
    row.line = rec->line;
    row.timestamp = std::string(csv::trim(f[c_ts]));
    try {
      row.date = Date::parse_timestamp_utc(row.timestamp);
    } catch (const DataError&) {
      reject("malformed timestamp");
      continue;
    }
    const auto price = csv::parse_double(f[c_price]);
    if (!price || !std::isfinite(*price)) {
      reject("malformed native_price");
      continue;
    }
    if (!(*price > 0.0)) {
      reject("native_price <= 0");
      continue;
    }
    row.native_price = *price;
    row.currency = std::string(csv::trim(f[c_cur]));
    if (row.currency.empty()) {
      reject("missing currency");
      continue;
    }
    if (!schema.symbols.empty() && !contains(schema.symbols, row.currency)) {
      reject("unknown currency");
      continue;
    }
    const auto plots = csv::parse_int(f[c_plots]);
    if (!plots || *plots > std::numeric_limits<int>::max() ||
        *plots < std::numeric_limits<int>::min()) {
      reject("malformed num_plots");
      continue;
    }
    if (*plots < 1) {
      reject("plot count < 1");
      continue;
    }
    row.num_plots = static_cast<int>(*plots);
    row.tx_id = std::string(csv::trim(f[c_id]));
    out.rows.push_back(std::move(row));
  }
  return out;
}

TransactionLoad load_transactions(const std::filesystem::path& path, const SchemaConfig& schema) {
  auto in = open_input(path);
  return parse_transactions(in, schema, path.string());
}

void FxTable::insert(Date date, const std::string& symbol, double usd_price) {
  if (symbol.empty()) throw ValidationError("fx: empty symbol on " + date.to_string());
  if (!(usd_price > 0.0) || !std::isfinite(usd_price)) {
    throw ValidationError("fx: non-positive price for " + symbol + " on " + date.to_string());
  }
  if (!quotes_.emplace(std::pair{symbol, date}, usd_price).second) {
    throw ValidationError("fx: duplicate quote for " + symbol + " on " + date.to_string());
  }
}

std::optional<double> FxTable::find(Date date, const std::string& symbol) const {
  const auto it = quotes_.find(std::pair{symbol, date});
  if (it == quotes_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> FxTable::symbols() const {
  std::vector<std::string> out;
  for (const auto& [key, price] : quotes_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

TimeSeries FxTable::series(const std::string& symbol) const {
  std::vector<Date> dates;
  std::vector<double> values;
  for (auto it = quotes_.lower_bound(std::pair{symbol, Date{std::numeric_limits<std::int32_t>::min()}});
       it != quotes_.end() && it->first.first == symbol; ++it) {
    dates.push_back(it->first.second);
    values.push_back(it->second);
  }
  if (dates.empty()) throw ValidationError("fx: no quotes for symbol '" + symbol + "'");
  return TimeSeries(symbol, Frequency::daily, std::move(dates), std::move(values));
}

FxTable FxTable::scaled(double factor) const {
  FxTable out;
  for (const auto& [key, price] : quotes_) out.insert(key.second, key.first, price * factor);
  return out;
}

FxTable parse_daily_prices(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  const auto width = reader.read_header().size();
  const std::size_t c_date = reader.column("date");
  const std::size_t c_sym = reader.column("symbol");
  const std::size_t c_price = reader.column("usd_price");
  FxTable table;
  while (auto rec = reader.next()) {
    const std::string where = source + ":" + std::to_string(rec->line) + ": ";
    if (!rec->fields || rec->fields->size() != width) {
      throw ValidationError(where + "malformed row");
    }
    const auto& f = *rec->fields;
    Date date;
    try {
      date = Date::parse(csv::trim(f[c_date]));
    } catch (const DataError&) {
      throw ValidationError(where + "malformed date '" + f[c_date] + "'");
    }
    const std::string symbol(csv::trim(f[c_sym]));
    const auto price = csv::parse_double(f[c_price]);
    if (!price) throw ValidationError(where + "malformed usd_price '" + f[c_price] + "'");
    try {
      table.insert(date, symbol, *price);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return table;
}

FxTable load_daily_prices(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_daily_prices(in, path.string());
}

Conversion to_usd(std::span<const RawTransactionRow> rows, const FxTable& fx,
                  const FxOptions& options) {
  Conversion out;
  for (const auto& row : rows) {
    const bool weth = row.currency == options.weth_symbol;
    std::optional<double> quote;
    if (options.stable_passthrough && contains(options.stable_symbols, row.currency)) {
      quote = 1.0;
    } else {
      quote = fx.find(row.date, weth ? options.eth_symbol : row.currency);
    }
    if (!quote) {
      out.rejected.push_back({row.line, "no fx for date"});
      continue;
    }
    Transaction tx;
    tx.date = row.date;
    tx.usd_price = row.native_price * *quote;
    tx.num_plots = row.num_plots;
    tx.paid_in_weth = weth;
    tx.native_currency = row.currency;
    tx.native_price = row.native_price;
    tx.tx_id = row.tx_id;
    out.transactions.push_back(std::move(tx));
    out.lines.push_back(row.line);
  }
  return out;
}

series::SummaryStats Dataset::price_summary() const {
  std::vector<double> prices;
  prices.reserve(transactions.size());
  for (const auto& tx : transactions) prices.push_back(tx.usd_price);
  return series::summary_stats(prices);
}

double Dataset::weth_share() const noexcept {
  if (transactions.empty()) return 0.0;
  const auto n = std::count_if(transactions.begin(), transactions.end(),
                               [](const Transaction& tx) { return tx.paid_in_weth; });
  return static_cast<double>(n) / static_cast<double>(transactions.size());
}

Dataset prepare_dataset(std::vector<Transaction> transactions, std::string metaverse,
                        double winsor_lo, double winsor_hi, std::vector<Rejection> rejected) {
  if (transactions.size() < 10) {
    throw InsufficientDataError("prepare_dataset: " + std::to_string(transactions.size()) +
                                " accepted transactions for '" + metaverse +
                                "'; at least 10 needed");
  }
  std::vector<double> prices;
  prices.reserve(transactions.size());
  for (const auto& tx : transactions) {
    if (!(tx.usd_price > 0.0) || !std::isfinite(tx.usd_price)) {
      throw ValidationError("prepare_dataset: non-positive USD price on " + tx.date.to_string());
    }
    prices.push_back(tx.usd_price);
  }
  const auto clamped = series::winsorize(prices, winsor_lo, winsor_hi);

  Dataset out;
  out.metaverse = std::move(metaverse);
  out.winsor_lo = winsor_lo;
  out.winsor_hi = winsor_hi;
  out.min_date = transactions.front().date;
  out.max_date = transactions.front().date;
  for (std::size_t i = 0; i < transactions.size(); ++i) {
    if (clamped[i] != transactions[i].usd_price) ++out.n_clamped;
    transactions[i].usd_price = clamped[i];
    out.min_date = std::min(out.min_date, transactions[i].date);
    out.max_date = std::max(out.max_date, transactions[i].date);
  }
  out.transactions = std::move(transactions);
  std::stable_sort(rejected.begin(), rejected.end(),
                   [](const Rejection& a, const Rejection& b) { return a.line < b.line; });
  out.rejected = std::move(rejected);
  return out;
}

}  // namespace landbubble::ingest
