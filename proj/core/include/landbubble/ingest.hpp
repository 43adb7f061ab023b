#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "landbubble/series.hpp"
#include "landbubble/time_series.hpp"
#include "landbubble/transaction.hpp"

namespace landbubble::ingest {

/// Column names of the transactions file and the accepted settlement symbols.
struct SchemaConfig {
  std::string timestamp = "timestamp";
  std::string native_price = "native_price";
  std::string currency = "currency";
  std::string num_plots = "num_plots";
  std::string tx_id = "tx_id";
  /// Accepted currency labels (case-sensitive). Empty accepts any label.
  std::vector<std::string> symbols;
};

struct RawTransactionRow {
  /// 1-based physical line in the source file (the header is line 1).
  std::size_t line = 0;
  std::string timestamp;
  /// UTC calendar date of `timestamp`.
  Date date;
  double native_price = 0.0;
  std::string currency;
  int num_plots = 1;
  std::string tx_id;
};

/// A row that was not accepted, with a short machine-readable reason such as
/// "plot count < 1" or "no fx for date".
struct Rejection {
  std::size_t line = 0;
  std::string reason;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct TransactionLoad {
  std::vector<RawTransactionRow> rows;
  std::vector<Rejection> rejected;
  /// Data rows read (blank lines excluded); rows + rejected always equals it.
  std::size_t n_input = 0;
};

/// Throws IoError if the file cannot be read and SchemaError when the header
/// lacks a configured column. Malformed rows are collected, never dropped.
[[nodiscard]] TransactionLoad load_transactions(const std::filesystem::path& path,
                                                const SchemaConfig& schema = {});
[[nodiscard]] TransactionLoad parse_transactions(std::istream& in, const SchemaConfig& schema = {},
                                                 const std::string& source = "<stream>");

/// Daily USD quotes keyed by (date, symbol).
class FxTable {
 public:
  /// Throws ValidationError on a duplicate key or a non-positive price.
  void insert(Date date, const std::string& symbol, double usd_price);

  [[nodiscard]] std::optional<double> find(Date date, const std::string& symbol) const;
  [[nodiscard]] std::size_t size() const noexcept { return quotes_.size(); }
  [[nodiscard]] bool empty() const noexcept { return quotes_.empty(); }
  [[nodiscard]] std::vector<std::string> symbols() const;
  [[nodiscard]] const std::map<std::pair<std::string, Date>, double>& quotes() const noexcept {
    return quotes_;
  }

  /// Daily price series of one symbol. Throws ValidationError if absent.
  [[nodiscard]] TimeSeries series(const std::string& symbol) const;

  /// Every quote multiplied by `factor`.
  [[nodiscard]] FxTable scaled(double factor) const;

 private:
  std::map<std::pair<std::string, Date>, double> quotes_;
};

/// Reads `date,symbol,usd_price`. Any bad row fails the whole load with a
/// ValidationError naming its line.
[[nodiscard]] FxTable load_daily_prices(const std::filesystem::path& path);
[[nodiscard]] FxTable parse_daily_prices(std::istream& in, const std::string& source = "<stream>");

struct FxOptions {
  /// Settles at the `eth_symbol` quote and sets paid_in_weth.
  std::string weth_symbol = "WETH";
  std::string eth_symbol = "ETH";
  /// Labels valued at exactly 1 USD when `stable_passthrough` is set.
  std::vector<std::string> stable_symbols{"USD", "USDC", "USDT", "DAI"};
  bool stable_passthrough = true;
};

struct Conversion {
  std::vector<Transaction> transactions;
  /// Source line of each accepted transaction.
  std::vector<std::size_t> lines;
  std::vector<Rejection> rejected;
};

/// usd_price = native_price x the same-date quote of the settlement currency.
[[nodiscard]] Conversion to_usd(std::span<const RawTransactionRow> rows, const FxTable& fx,
                                const FxOptions& options = {});

struct Dataset {
  std::string metaverse;
  /// Input order preserved; usd_price winsorized.
  std::vector<Transaction> transactions;
  Date min_date;
  Date max_date;
  std::vector<Rejection> rejected;
  double winsor_lo = 0.001;
  double winsor_hi = 0.999;
  /// Prices changed by winsorization.
  std::size_t n_clamped = 0;

  [[nodiscard]] std::size_t n_input() const noexcept {
    return transactions.size() + rejected.size();
  }
  /// Summary of the (winsorized) USD prices.
  [[nodiscard]] series::SummaryStats price_summary() const;
  /// Share of transactions settled in wETH.
  [[nodiscard]] double weth_share() const noexcept;
};

/// Winsorizes USD prices across the whole sample and records coverage.
/// Throws InsufficientDataError below 10 transactions.
[[nodiscard]] Dataset prepare_dataset(std::vector<Transaction> transactions,
                                      std::string metaverse, double winsor_lo = 0.001,
                                      double winsor_hi = 0.999,
                                      std::vector<Rejection> rejected = {});

}  // namespace landbubble::ingest
