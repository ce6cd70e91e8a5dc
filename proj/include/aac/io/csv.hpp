#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aac::csv {

using Row = std::vector<std::string>;

/// RFC 4180 parsing: quoted fields may hold commas, doubled quotes and line
/// breaks. Accepts LF or CRLF line endings and an optional UTF-8 BOM.
std::vector<Row> parse(std::string_view text);

std::string quote_if_needed(std::string_view field);
std::string format_row(const Row& row);

}  // namespace aac::csv
