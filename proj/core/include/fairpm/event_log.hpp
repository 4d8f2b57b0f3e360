#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fairpm/attribute.hpp"

namespace fairpm {

inline constexpr std::string_view kConceptName = "concept:name";
inline constexpr std::string_view kTimeTimestamp = "time:timestamp";
inline constexpr std::string_view kOrgResource = "org:resource";

// Position of an event in a trace's total order: timestamps are broken by the
// ingestion ordinal.
struct EventKey {
  Timestamp time;
  std::uint32_t ordinal = 0;

  friend constexpr auto operator<=>(const EventKey&, const EventKey&) = default;
};

struct Event {
  std::string activity;
  Timestamp time;
  // Attributes other than concept:name and time:timestamp.
  AttributeMap attributes;
  std::uint32_t ordinal = 0;

  EventKey key() const { return {time, ordinal}; }

  // Lookup that also answers concept:name and time:timestamp.
  OptionalValue attribute(std::string_view name) const;
};

struct Trace {
  AttributeMap attributes;
  std::vector<Event> events;

  OptionalValue attribute(std::string_view name) const;

  // The concept:name trace attribute rendered as text, or empty.
  std::string case_id() const;

  // Sorts events by (time, ordinal).
  void normalize();
};

struct AttributeInfo {
  std::set<ValueTag> tags;
  std::set<AttributeValue, ValueOrder> values;
};

// Immutable in-memory log. Construction sorts every trace's events by
// (time, ordinal); ordinals must be unique per trace.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::vector<Trace> traces, AttributeMap log_attributes = {});

  const std::vector<Trace>& traces() const { return traces_; }
  const AttributeMap& attributes() const { return attributes_; }
  std::size_t size() const { return traces_.size(); }
  std::size_t event_count() const;

  // values(att) over trace-level attributes.
  const std::map<std::string, AttributeInfo, std::less<>>& trace_catalog() const {
    return trace_catalog_;
  }
  // values(att) over event-level attributes (concept:name included).
  const std::map<std::string, AttributeInfo, std::less<>>& event_catalog() const {
    return event_catalog_;
  }

  // Copies the traces out, e.g. for building an enriched log.
  std::vector<Trace> release() const { return traces_; }

 private:
  std::vector<Trace> traces_;
  AttributeMap attributes_;
  std::map<std::string, AttributeInfo, std::less<>> trace_catalog_;
  std::map<std::string, AttributeInfo, std::less<>> event_catalog_;
};

// Events whose key is at most `cutoff`, in trace order.
std::span<const Event> events_up_to(const Trace& trace, EventKey cutoff);

// Latest event (by key) whose activity equals `activity`.
const Event* latest_event_with_activity(std::span<const Event> events,
                                        std::string_view activity);

}  // namespace fairpm
