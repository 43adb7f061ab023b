#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landbubble/exuberance.hpp"
#include "landbubble/hedonic.hpp"
#include "landbubble/ingest.hpp"
#include "landbubble/series.hpp"
#include "landbubble/synthkit.hpp"
#include "landbubble/time_series.hpp"
#include "landbubble/var_granger.hpp"

/// CSV renderings of the library's outputs. Every function returns the full
/// file text with a header line and LF line endings; numbers use the shortest
/// round-trip decimal form, so output is byte-stable for equal inputs.
namespace landbubble::io {

/// `date,value`
[[nodiscard]] std::string series_csv(const TimeSeries& series);
/// Reads `date,value`. The frequency is weekly when every spacing is a
/// multiple of 7 days (and at least one step exists), daily otherwise, unless
/// given explicitly.
[[nodiscard]] TimeSeries read_series_csv(const std::filesystem::path& path, std::string name,
                                         std::optional<Frequency> freq = std::nullopt);

/// `offset,corr,n_pairs`; undefined correlations are left empty.
[[nodiscard]] std::string correlogram_csv(const series::Correlogram& correlogram);

/// `date,stat,cv,flag`
[[nodiscard]] std::string bubble_csv(const exuberance::DatestampResult& result);
/// `start,end,peak_stat`
[[nodiscard]] std::string episodes_csv(const exuberance::DatestampResult& result);
/// `t,cv_<alpha>...`
[[nodiscard]] std::string cv_table_csv(const exuberance::CvTable& table);

/// `period,index,delta,n_transactions`
[[nodiscard]] std::string hpi_csv(const hedonic::HpiResult& result);

/// `lag,controls,direction,f_stat,p_value,df_num,df_den,n_obs`
[[nodiscard]] std::string granger_csv(std::span<const var::GrangerResult> rows);

/// `line,reason`
[[nodiscard]] std::string rejections_csv(std::span<const ingest::Rejection> rejected);

/// `date,symbol,usd_price`
[[nodiscard]] std::string prices_csv(std::span<const synth::Quote> quotes);
/// Transactions in the ingest schema, timestamps at midnight UTC.
[[nodiscard]] std::string transactions_csv(std::span<const Transaction> transactions);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& text);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace landbubble::io
