#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "fairpm/event_log.hpp"

namespace fairpm {

struct XesReadOptions {
  // Events lacking time:timestamp inherit the previous event's timestamp in
  // document order (epoch for the first event); the ordinal keeps them in
  // document order. When false such events are rejected.
  bool synthesize_missing_timestamps = false;
};

// Reads an IEEE 1849 XES document. Typed attributes string, id, int, float,
// boolean and date are supported; list and container attributes are skipped.
EventLog parse_xes(std::istream& in, const XesReadOptions& options = {});
EventLog parse_xes(std::string_view document, const XesReadOptions& options = {});

void serialize_xes(const EventLog& log, std::ostream& out);
std::string serialize_xes(const EventLog& log);

}  // namespace fairpm
