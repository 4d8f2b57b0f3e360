#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fairpm::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
// Blank lines are skipped. Throws ParseError on an unterminated quote.
std::vector<Row> read(std::string_view text);
std::vector<Row> read(std::istream& in);

std::string quote(std::string_view field);
void write_row(std::ostream& out, const Row& row);

}  // namespace fairpm::csv
