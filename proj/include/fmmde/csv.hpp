#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fmmde::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes;
/// surrounding whitespace of unquoted fields is trimmed.
std::vector<std::string> split_line(std::string_view line);

/// Reads all records; strips a UTF-8 BOM and trailing '\r'. Blank lines are
/// returned as empty vectors so callers can report line numbers.
std::vector<std::vector<std::string>> read_all(std::istream& in);

/// Quotes a field if it contains a separator, quote or newline.
std::string escape(std::string_view field);

/// Shortest round-trip representation ("nan" for NaN).
std::string format_double(double value);

/// Parses a number, rejecting trailing garbage. Empty or "NaN"/"NA" yield NaN
/// when allow_missing is set; otherwise they throw InputError.
double parse_double(std::string_view field, bool allow_missing);

}  // namespace fmmde::csv
