#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fairpm/attribute.hpp"

namespace fairpm {

// Parses ISO-8601 / xs:dateTime text such as "2011-03-01T10:00:00.000+01:00".
// Offsets are resolved to UTC; a missing offset is read as UTC. Fractional
// seconds beyond milliseconds are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// "YYYY-MM-DDTHH:MM:SS.mmm+00:00"
std::string format_iso8601(Timestamp time);

}  // namespace fairpm
