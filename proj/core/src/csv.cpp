#include "landbubble/csv.hpp"

#include <charconv>
#include <cmath>

#include "landbubble/error.hpp"

namespace landbubble::csv {

std::optional<std::vector<std::string>> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) noexcept {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<long long> parse_int(std::string_view text) noexcept {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Reader::Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

const std::vector<std::string>& Reader::read_header() {
  auto rec = next();
  if (!rec) throw SchemaError(source_ + ": empty input, expected a header line");
  if (!rec->fields) throw SchemaError(source_ + ": malformed header line");
  header_.clear();
  index_.clear();
  for (const auto& f : *rec->fields) {
    header_.emplace_back(trim(f));
    index_.emplace(header_.back(), header_.size() - 1);
  }
  return header_;
}

std::size_t Reader::column(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) {
    throw SchemaError(source_ + ": header lacks required column '" + name + "'");
  }
  return it->second;
}

std::optional<Reader::Record> Reader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    return Record{line_, split_line(line)};
  }
  if (in_.bad()) throw IoError(source_ + ": read failure at line " + std::to_string(line_ + 1));
  return std::nullopt;
}

}  // namespace landbubble::csv
