#include "fairpm/event_log.hpp"

#include <algorithm>

#include "fairpm/error.hpp"

namespace fairpm {

OptionalValue Event::attribute(std::string_view name) const {
  if (name == kConceptName) return AttributeValue(activity);
  if (name == kTimeTimestamp) return AttributeValue(time);
  if (auto it = attributes.find(name); it != attributes.end()) return it->second;
  return std::nullopt;
}

OptionalValue Trace::attribute(std::string_view name) const {
  if (auto it = attributes.find(name); it != attributes.end()) return it->second;
  return std::nullopt;
}

std::string Trace::case_id() const {
  auto id = attribute(kConceptName);
  return id ? id->to_display() : std::string{};
}

void Trace::normalize() {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.key() < b.key(); });
}

EventLog::EventLog(std::vector<Trace> traces, AttributeMap log_attributes)
    : traces_(std::move(traces)), attributes_(std::move(log_attributes)) {
  for (std::size_t t = 0; t < traces_.size(); ++t) {
    Trace& trace = traces_[t];
    trace.normalize();
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      const Event& e = trace.events[i];
      if (e.activity.empty()) {
        throw Error("trace " + std::to_string(t) + ": event with empty activity");
      }
      if (i > 0 && trace.events[i - 1].key() == e.key()) {
        throw Error("trace " + std::to_string(t) + ": duplicate event ordinal " +
                    std::to_string(e.ordinal));
      }
    }
    for (const auto& [name, value] : trace.attributes) {
      auto& info = trace_catalog_[name];
      info.tags.insert(value.tag());
      info.values.insert(value);
    }
    for (const Event& e : trace.events) {
      auto& names = event_catalog_[std::string(kConceptName)];
      names.tags.insert(ValueTag::kText);
      names.values.insert(AttributeValue(e.activity));
      for (const auto& [name, value] : e.attributes) {
        auto& info = event_catalog_[name];
        info.tags.insert(value.tag());
        info.values.insert(value);
      }
    }
  }
}

std::size_t EventLog::event_count() const {
  std::size_t total = 0;
  for (const auto& t : traces_) total += t.events.size();
  return total;
}

std::span<const Event> events_up_to(const Trace& trace, EventKey cutoff) {
  auto end = std::upper_bound(trace.events.begin(), trace.events.end(), cutoff,
                              [](const EventKey& key, const Event& e) { return key < e.key(); });
  return {trace.events.data(), static_cast<std::size_t>(end - trace.events.begin())};
}

const Event* latest_event_with_activity(std::span<const Event> events,
                                        std::string_view activity) {
  const Event* best = nullptr;
  for (const Event& e : events) {
    if (e.activity == activity && (best == nullptr || best->key() < e.key())) best = &e;
  }
  return best;
}

}  // namespace fairpm
