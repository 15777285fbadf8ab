#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace pathmap::tsv {

/// Splits a line on tabs. Does not trim fields (identifiers are opaque).
std::vector<std::string> split_fields(std::string_view line);

/// Calls `fn(line_no, fields)` for every data line of a TSV stream.
/// Line numbers are 1-based over the raw file. CRLF is normalized,
/// `#`-prefixed lines and blank lines are skipped.
void for_each_row(std::istream& in,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& fn);

/// Serializes a double with 6 digits after the point, switching to
/// mantissa-exponent form below 1e-4 (e.g. `3.200000e-7`).
std::string format_value(double v);

} // namespace pathmap::tsv
