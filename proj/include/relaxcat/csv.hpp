#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace relaxcat {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double value);

/// Parses a full token as a double (locale independent); throws ConfigError.
double parse_number(std::string_view text);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace relaxcat
