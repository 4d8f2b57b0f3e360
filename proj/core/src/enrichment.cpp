#include "fairpm/enrichment.hpp"

#include <algorithm>
#include <limits>

#include "fairpm/error.hpp"

namespace fairpm {

void EnrichmentConfig::validate() const {
  if (delay_mode == DelayThresholdMode::kFractionOfMaxDuration) {
    if (!(delay_value > 0.0 && delay_value <= 1.0)) {
      throw Error("delay threshold fraction must lie in (0, 1]");
    }
  } else if (!(delay_value > 0.0)) {
    throw Error("absolute delay threshold must be positive");
  }
  if (workload_window_millis <= 0) throw Error("workload window must be positive");
}

EventLog enrich_trace_duration(const EventLog& log) {
  auto traces = log.release();
  for (Trace& trace : traces) {
    if (trace.events.empty()) {
      trace.attributes.erase(std::string(attr::kTraceDuration));
      continue;
    }
    std::int64_t duration = trace.events.back().time.millis - trace.events.front().time.millis;
    trace.attributes.insert_or_assign(std::string(attr::kTraceDuration), AttributeValue(duration));
  }
  return EventLog(std::move(traces), log.attributes());
}

namespace {

std::optional<std::int64_t> duration_of(const Trace& trace) {
  auto value = trace.attribute(attr::kTraceDuration);
  if (!value || value->tag() != ValueTag::kInteger) return std::nullopt;
  return value->as_integer();
}

}  // namespace

double delay_threshold(const EventLog& log, const EnrichmentConfig& config) {
  config.validate();
  if (config.delay_mode == DelayThresholdMode::kAbsoluteMillis) return config.delay_value;
  std::int64_t longest = 0;
  for (const Trace& trace : log.traces()) {
    if (auto d = duration_of(trace)) longest = std::max(longest, *d);
  }
  return config.delay_value * static_cast<double>(longest);
}

EventLog enrich_trace_delay(const EventLog& log, const EnrichmentConfig& config) {
  const double threshold = delay_threshold(log, config);
  auto traces = log.release();
  for (Trace& trace : traces) {
    const std::string key(attr::kTraceDelay);
    std::optional<bool> delayed;
    if (config.deadline_attribute && !trace.events.empty()) {
      auto deadline = trace.attribute(*config.deadline_attribute);
      if (deadline && deadline->tag() == ValueTag::kTimestamp) {
        delayed = trace.events.back().time > deadline->as_timestamp();
      }
    }
    if (!delayed) {
      if (auto d = duration_of(trace)) delayed = static_cast<double>(*d) > threshold;
    }
    if (delayed) {
      trace.attributes.insert_or_assign(
          key, AttributeValue(std::string(*delayed ? attr::kDelayed : attr::kOnTime)));
    } else {
      trace.attributes.erase(key);
    }
  }
  return EventLog(std::move(traces), log.attributes());
}

EventLog enrich_neighbor_activities(const EventLog& log) {
  auto traces = log.release();
  const std::string next_key(attr::kNextActivity), prev_key(attr::kPrevActivity);
  for (Trace& trace : traces) {
    auto& events = trace.events;
    for (std::size_t i = 0; i < events.size(); ++i) {
      auto& attributes = events[i].attributes;
      if (i > 0) {
        attributes.insert_or_assign(prev_key, AttributeValue(events[i - 1].activity));
      } else {
        attributes.erase(prev_key);
      }
      if (i + 1 < events.size()) {
        attributes.insert_or_assign(next_key, AttributeValue(events[i + 1].activity));
      } else {
        attributes.erase(next_key);
      }
    }
  }
  return EventLog(std::move(traces), log.attributes());
}

namespace {

// Number of entries of the sorted `times` in (t - window, t].
std::int64_t count_window(const std::vector<std::int64_t>& times, std::int64_t t,
                          std::int64_t window) {
  auto hi = std::upper_bound(times.begin(), times.end(), t);
  std::int64_t lower = t - window;
  if (t < std::numeric_limits<std::int64_t>::min() + window) lower = std::numeric_limits<std::int64_t>::min();
  auto lo = std::upper_bound(times.begin(), hi, lower);
  return static_cast<std::int64_t>(hi - lo);
}

}  // namespace

EventLog enrich_workloads(const EventLog& log, const EnrichmentConfig& config) {
  config.validate();
  const std::int64_t window = config.workload_window_millis;
  std::vector<std::int64_t> all;
  std::map<AttributeValue, std::vector<std::int64_t>, ValueOrder> by_resource;
  for (const Trace& trace : log.traces()) {
    for (const Event& e : trace.events) {
      all.push_back(e.time.millis);
      if (auto r = e.attribute(kOrgResource)) by_resource[*r].push_back(e.time.millis);
    }
  }
  std::sort(all.begin(), all.end());
  for (auto& [resource, times] : by_resource) std::sort(times.begin(), times.end());

  auto traces = log.release();
  const std::string total_key(attr::kTotalWorkload), resource_key(attr::kResourceWorkload);
  for (Trace& trace : traces) {
    for (Event& e : trace.events) {
      e.attributes.insert_or_assign(total_key, AttributeValue(count_window(all, e.time.millis, window)));
      if (auto r = e.attribute(kOrgResource)) {
        e.attributes.insert_or_assign(
            resource_key, AttributeValue(count_window(by_resource.at(*r), e.time.millis, window)));
      } else {
        e.attributes.erase(resource_key);
      }
    }
  }
  return EventLog(std::move(traces), log.attributes());
}

EventLog enrich_conformance(const EventLog& log, const ConformanceResults& results) {
  auto traces = log.release();
  const std::string deviation_key(attr::kTraceDeviation), model_key(attr::kTraceModelMoves),
      log_key(attr::kTraceLogMoves);
  for (Trace& trace : traces) {
    auto it = results.find(trace.case_id());
    if (it == results.end() || trace.case_id().empty()) {
      trace.attributes.erase(deviation_key);
      trace.attributes.erase(model_key);
      trace.attributes.erase(log_key);
      continue;
    }
    const ReplayResult& r = it->second;
    trace.attributes.insert_or_assign(deviation_key, AttributeValue(r.deviation));
    trace.attributes.insert_or_assign(model_key, AttributeValue(static_cast<std::int64_t>(r.model_moves)));
    trace.attributes.insert_or_assign(log_key, AttributeValue(static_cast<std::int64_t>(r.log_moves)));
  }
  return EventLog(std::move(traces), log.attributes());
}

EventLog enrich_all(const EventLog& log, const EnrichmentConfig& config) {
  config.validate();
  EventLog out = enrich_trace_duration(log);
  out = enrich_trace_delay(out, config);
  out = enrich_neighbor_activities(out);
  return enrich_workloads(out, config);
}

}  // namespace fairpm
