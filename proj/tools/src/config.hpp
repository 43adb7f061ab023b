#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace landbubble::app {

/// Bad command line or config file. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Flat `key = value` text. `#` starts a comment line, blank lines are
/// ignored, surrounding whitespace and one pair of double quotes around the
/// value are stripped. Keys are the long flag names without the dashes.
[[nodiscard]] std::vector<ConfigEntry> parse_config(std::string_view text, const std::string& source);

/// Removes `--config FILE` / `--config=FILE` from `args` and returns FILE
/// (empty when absent).
[[nodiscard]] std::string extract_config_path(std::vector<std::string>& args);

/// Appends `--key=value` for every entry whose flag is not already on the
/// command line, so explicit flags win.
void merge_config(std::vector<std::string>& args, const std::vector<ConfigEntry>& entries);

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes) noexcept;
[[nodiscard]] std::string hex64(std::uint64_t value);

}  // namespace landbubble::app
