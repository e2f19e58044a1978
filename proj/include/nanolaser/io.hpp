#pragma once

// Text helpers shared by the CSV writers and readers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nanolaser {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);
std::string format_optional(const std::optional<double>& x);

/// Splits one CSV line on commas (no quoting is used by our writers).
std::vector<std::string> split_csv(std::string_view line);

/// Strict parse of a whole field; throws Error on trailing garbage.
double parse_double(std::string_view s);
std::optional<double> parse_optional(std::string_view s);

} // namespace nanolaser
