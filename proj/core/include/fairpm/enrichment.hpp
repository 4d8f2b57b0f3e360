#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fairpm/conformance.hpp"
#include "fairpm/event_log.hpp"

namespace fairpm {

namespace attr {
inline constexpr std::string_view kTraceDuration = "trace:duration";
inline constexpr std::string_view kTraceDelay = "trace:delay";
inline constexpr std::string_view kTraceDeviation = "trace:deviation";
inline constexpr std::string_view kTraceModelMoves = "trace:numberModelMove";
inline constexpr std::string_view kTraceLogMoves = "trace:numberLogMove";
inline constexpr std::string_view kNextActivity = "next:activity";
inline constexpr std::string_view kPrevActivity = "prev:activity";
inline constexpr std::string_view kTotalWorkload = "total:workload";
inline constexpr std::string_view kResourceWorkload = "resource:workload";
inline constexpr std::string_view kOnTime = "on-time";
inline constexpr std::string_view kDelayed = "delayed";
}  // namespace attr

enum class DelayThresholdMode { kFractionOfMaxDuration, kAbsoluteMillis };

struct EnrichmentConfig {
  DelayThresholdMode delay_mode = DelayThresholdMode::kFractionOfMaxDuration;
  double delay_value = 0.02;
  // Trace attribute holding a deadline timestamp. Traces that carry it are
  // delayed iff their last event happens after the deadline.
  std::optional<std::string> deadline_attribute;
  std::int64_t workload_window_millis = 7LL * 24 * 60 * 60 * 1000;

  // Throws Error when the delay value is out of range for its mode or the
  // workload window is not positive.
  void validate() const;
};

// Each helper returns a new log; events and traces keep their order and only
// gain attributes. Re-running a helper overwrites its own attributes with the
// same values.
EventLog enrich_trace_duration(const EventLog& log);
EventLog enrich_trace_delay(const EventLog& log, const EnrichmentConfig& config);
EventLog enrich_neighbor_activities(const EventLog& log);
EventLog enrich_workloads(const EventLog& log, const EnrichmentConfig& config);
EventLog enrich_conformance(const EventLog& log, const ConformanceResults& results);

// Duration, delay, neighbours and workloads in that order.
EventLog enrich_all(const EventLog& log, const EnrichmentConfig& config);

// Threshold in milliseconds that enrich_trace_delay applies to this log.
double delay_threshold(const EventLog& log, const EnrichmentConfig& config);

}  // namespace fairpm
