#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landbubble::csv {

/// Splits one record on commas. Double-quoted fields may contain commas and
/// "" escapes. Returns nullopt for an unterminated quote.
[[nodiscard]] std::optional<std::vector<std::string>> split_line(std::string_view line);

[[nodiscard]] std::string_view trim(std::string_view text) noexcept;

/// Locale-independent number parsing of the whole (trimmed) field.
[[nodiscard]] std::optional<double> parse_double(std::string_view text) noexcept;
[[nodiscard]] std::optional<long long> parse_int(std::string_view text) noexcept;

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Quotes a field when it holds a comma, quote or line break.
[[nodiscard]] std::string escape(std::string_view field);

/// Line-oriented reader: strips a UTF-8 BOM and trailing CR, skips blank
/// lines and counts physical lines from 1.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  /// Reads the header. Throws SchemaError on an empty input.
  const std::vector<std::string>& read_header();
  /// Column position of `name`; throws SchemaError when missing.
  [[nodiscard]] std::size_t column(const std::string& name) const;

  /// Next non-blank record. `fields` is nullopt when the line is malformed.
  struct Record {
    std::size_t line = 0;
    std::optional<std::vector<std::string>> fields;
  };
  [[nodiscard]] std::optional<Record> next();

  [[nodiscard]] const std::string& source() const noexcept { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace landbubble::csv
