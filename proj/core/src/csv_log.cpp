#include "fairpm/csv_log.hpp"

#include <iterator>
#include <unordered_map>

#include "fairpm/csv.hpp"
#include "fairpm/error.hpp"
#include "fairpm/timestamp.hpp"

namespace fairpm {

EventLog parse_csv_log(std::string_view text) {
  auto rows = csv::read(text);
  if (rows.empty()) throw ParseError("CSV log: missing header row");
  const csv::Row& header = rows.front();
  if (header.size() < 3) {
    throw ParseError("CSV log: header needs case id, activity and timestamp columns", 1, 1);
  }

  std::vector<Trace> traces;
  std::unordered_map<std::string, std::size_t> by_case;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError("CSV log: row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                           " fields, header has " + std::to_string(header.size()),
                       r + 1, 1);
    }
    if (row[1].empty()) throw ParseError("CSV log: row " + std::to_string(r) + " has no activity", r + 1, 1);
    auto time = parse_iso8601(row[2]);
    if (!time) {
      throw ParseError("CSV log: row " + std::to_string(r) + " has timestamp '" + row[2] + "'",
                       r + 1, 1);
    }
    auto [it, inserted] = by_case.try_emplace(row[0], traces.size());
    if (inserted) {
      Trace trace;
      trace.attributes.emplace(std::string(kConceptName), AttributeValue(row[0]));
      traces.push_back(std::move(trace));
    }
    Trace& trace = traces[it->second];
    Event event;
    event.activity = row[1];
    event.time = *time;
    event.ordinal = static_cast<std::uint32_t>(trace.events.size());
    for (std::size_t c = 3; c < row.size(); ++c) {
      if (!row[c].empty()) event.attributes.insert_or_assign(header[c], infer_value(row[c]));
    }
    trace.events.push_back(std::move(event));
  }
  return EventLog(std::move(traces));
}

EventLog parse_csv_log(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_csv_log(std::string_view(text));
}

}  // namespace fairpm
