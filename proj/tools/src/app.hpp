#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace landbubble::app {

/// Runs the command line `args` (without the program name).
///
/// Exit codes: 0 success, 1 usage, 2 data validation, 3 numerical failure.
[[nodiscard]] int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace landbubble::app
