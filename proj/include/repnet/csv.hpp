#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace repnet::csv {

using Row = std::vector<std::string>;

/// Splits one CSV record. Double-quoted fields with "" escapes are supported;
/// embedded newlines are not.
Row split_line(std::string_view line);

/// Parses a whole document, skipping blank lines. A trailing '\r' is stripped.
std::vector<Row> parse(std::string_view text);

/// Quotes the field when it contains a delimiter, quote or whitespace edge.
std::string escape(std::string_view field);

std::string join(const Row& fields);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace repnet::csv
