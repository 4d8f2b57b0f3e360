#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairpm/event_log.hpp"

namespace fairpm {

// A trace's attribute map together with a non-empty prefix of its events.
// Borrows from the log it was derived from.
class Situation {
 public:
  Situation(const Trace& trace, std::size_t trace_index, std::size_t length)
      : trace_(&trace), trace_index_(trace_index), length_(length) {}

  const AttributeMap& trace_attributes() const { return trace_->attributes; }
  std::span<const Event> events() const { return {trace_->events.data(), length_}; }
  const Event& last_event() const { return trace_->events[length_ - 1]; }
  std::size_t trace_index() const { return trace_index_; }
  std::size_t length() const { return length_; }

 private:
  const Trace* trace_;
  std::size_t trace_index_;
  std::size_t length_;
};

// sf_{anchor,attribute}: trace-level when anchor is empty, otherwise the
// attribute of the latest `anchor` event inside the situation.
struct SituationFeature {
  std::optional<std::string> anchor;
  std::string attribute;

  // "attribute" for trace-level features, "anchor@attribute" otherwise.
  std::string name() const;
  // Inverse of name(); splits at the last '@'.
  static SituationFeature from_name(std::string_view name);

  friend bool operator==(const SituationFeature&, const SituationFeature&) = default;
};

// Ordered, duplicate-free, non-empty list of independent features.
class ExtractionPlan {
 public:
  explicit ExtractionPlan(std::vector<SituationFeature> features);

  const std::vector<SituationFeature>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  const SituationFeature& operator[](std::size_t i) const { return features_[i]; }
  bool contains(const SituationFeature& f) const;

 private:
  std::vector<SituationFeature> features_;
};

// anchor empty: one situation per non-empty trace. Otherwise one situation per
// event with that activity, truncated right after it.
std::vector<Situation> derive_situations(const EventLog& log,
                                         const std::optional<std::string>& anchor);

OptionalValue eval_feature(const SituationFeature& feature, const Situation& situation);

}  // namespace fairpm
