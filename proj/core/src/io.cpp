#include "landbubble/io.hpp"

#include <fstream>
#include <sstream>

#include "landbubble/csv.hpp"
#include "landbubble/error.hpp"

namespace landbubble::io {

using csv::format_double;

std::string series_csv(const TimeSeries& series) {
  std::string out = "date,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += series.date(i).to_string() + "," + format_double(series.value(i)) + "\n";
  }
  return out;
}

TimeSeries read_series_csv(const std::filesystem::path& path, std::string name,
                           std::optional<Frequency> freq) {
  std::istringstream in(read_file(path));
  const std::string source = path.string();
  csv::Reader reader(in, source);
  const auto width = reader.read_header().size();
  const std::size_t c_date = reader.column("date");
  const std::size_t c_value = reader.column("value");
  std::vector<Date> dates;
  std::vector<double> values;
  while (auto rec = reader.next()) {
    const std::string where = source + ":" + std::to_string(rec->line) + ": ";
    if (!rec->fields || rec->fields->size() != width) throw ValidationError(where + "malformed row");
    const auto& f = *rec->fields;
    try {
      dates.push_back(Date::parse(csv::trim(f[c_date])));
    } catch (const DataError&) {
      throw ValidationError(where + "malformed date '" + f[c_date] + "'");
    }
    const auto v = csv::parse_double(f[c_value]);
    if (!v) throw ValidationError(where + "malformed value '" + f[c_value] + "'");
    values.push_back(*v);
  }
  if (dates.empty()) throw InsufficientDataError(source + ": no observations");
  if (!freq) {
    bool weekly = dates.size() > 1;
    for (std::size_t i = 1; i < dates.size() && weekly; ++i) {
      weekly = (dates[i] - dates[i - 1]) % 7 == 0;
    }
    freq = weekly ? Frequency::weekly : Frequency::daily;
  }
  try {
    return TimeSeries(std::move(name), *freq, std::move(dates), std::move(values));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

std::string correlogram_csv(const series::Correlogram& correlogram) {
  std::string out = "offset,corr,n_pairs\n";
  for (const auto& e : correlogram.entries) {
    out += std::to_string(e.offset) + "," + (e.corr ? format_double(*e.corr) : std::string()) +
           "," + std::to_string(e.n_pairs) + "\n";
  }
  return out;
}

std::string bubble_csv(const exuberance::DatestampResult& result) {
  std::string out = "date,stat,cv,flag\n";
  for (const auto& f : result.flags) {
    out += f.date.to_string() + "," + format_double(f.stat) + "," + format_double(f.cv) + "," +
           (f.flag ? "1" : "0") + "\n";
  }
  return out;
}

std::string episodes_csv(const exuberance::DatestampResult& result) {
  std::string out = "start,end,peak_stat\n";
  for (const auto& e : result.episodes) {
    out += e.start_date.to_string() + "," + e.end_date.to_string() + "," +
           format_double(e.peak_stat) + "\n";
  }
  return out;
}

std::string cv_table_csv(const exuberance::CvTable& table) {
  std::string out = "t";
  for (double a : table.alphas) out += ",cv_" + format_double(a);
  out += "\n";
  for (std::size_t i = 0; i < table.cv_by_t.size(); ++i) {
    out += std::to_string(table.r0 + i);
    for (double v : table.cv_by_t[i]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string hpi_csv(const hedonic::HpiResult& result) {
  std::string out = "period,index,delta,n_transactions\n";
  for (const auto& p : result.points) {
    out += p.period.to_string() + "," + format_double(p.index) + "," + format_double(p.delta) +
           "," + std::to_string(p.n_transactions) + "\n";
  }
  return out;
}

std::string granger_csv(std::span<const var::GrangerResult> rows) {
  std::string out = "lag,controls,direction,f_stat,p_value,df_num,df_den,n_obs\n";
  for (const auto& r : rows) {
    out += std::to_string(r.p) + "," + (r.controls_included ? "true" : "false") + "," +
           csv::escape(r.cause + "->" + r.effect) + "," + format_double(r.f_stat) + "," +
           format_double(r.p_value) + "," + std::to_string(r.df_num) + "," +
           std::to_string(r.df_den) + "," + std::to_string(r.n_obs) + "\n";
  }
  return out;
}

std::string rejections_csv(std::span<const ingest::Rejection> rejected) {
  std::string out = "line,reason\n";
  for (const auto& r : rejected) out += std::to_string(r.line) + "," + csv::escape(r.reason) + "\n";
  return out;
}

std::string prices_csv(std::span<const synth::Quote> quotes) {
  std::string out = "date,symbol,usd_price\n";
  for (const auto& q : quotes) {
    out += q.date.to_string() + "," + csv::escape(q.symbol) + "," + format_double(q.usd_price) + "\n";
  }
  return out;
}

std::string transactions_csv(std::span<const Transaction> transactions) {
  std::string out = "timestamp,native_price,currency,num_plots,tx_id\n";
  for (const auto& tx : transactions) {
    out += tx.date.to_string() + "T00:00:00Z," + format_double(tx.native_price) + "," +
           csv::escape(tx.native_currency) + "," + std::to_string(tx.num_plots) + "," +
           csv::escape(tx.tx_id) + "\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError(path.string() + ": no such file");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace landbubble::io
