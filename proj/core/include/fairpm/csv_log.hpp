#pragma once

#include <istream>
#include <string_view>

#include "fairpm/event_log.hpp"

namespace fairpm {

// Event table with a header row: case id, activity and ISO-8601 timestamp in
// the first three columns, any further columns become event attributes (type
// inferred per cell, empty cells absent). Traces appear in order of first
// occurrence and carry the case id as concept:name.
EventLog parse_csv_log(std::string_view text);
EventLog parse_csv_log(std::istream& in);

}  // namespace fairpm
