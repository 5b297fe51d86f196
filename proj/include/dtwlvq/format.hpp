#pragma once

#include <string>

namespace dtwlvq {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// RFC 4180 quoting: wraps fields containing commas, quotes or line
/// breaks in double quotes, doubling embedded quotes.
std::string csv_quote(const std::string& field);

} // namespace dtwlvq
