#include "fairpm/situation.hpp"

#include <algorithm>

#include "fairpm/error.hpp"
#include "fairpm/labels.hpp"

namespace fairpm {

std::string_view to_string(RelabelMode mode) {
  switch (mode) {
    case RelabelMode::kBoth: return "both";
    case RelabelMode::kNegToPos: return "neg_to_pos";
    case RelabelMode::kPosToNeg: return "pos_to_neg";
  }
  return "?";
}

RelabelMode parse_relabel_mode(std::string_view text) {
  if (text == "both") return RelabelMode::kBoth;
  if (text == "neg_to_pos") return RelabelMode::kNegToPos;
  if (text == "pos_to_neg") return RelabelMode::kPosToNeg;
  throw Error("relabel mode must be both, neg_to_pos or pos_to_neg, got '" + std::string(text) + "'");
}

std::string SituationFeature::name() const {
  return anchor ? *anchor + "@" + attribute : attribute;
}

SituationFeature SituationFeature::from_name(std::string_view name) {
  auto at = name.rfind('@');
  if (at == std::string_view::npos) return {std::nullopt, std::string(name)};
  return {std::string(name.substr(0, at)), std::string(name.substr(at + 1))};
}

ExtractionPlan::ExtractionPlan(std::vector<SituationFeature> features)
    : features_(std::move(features)) {
  if (features_.empty()) throw Error("extraction plan needs at least one feature");
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].attribute.empty()) throw Error("situation feature with empty attribute");
    for (std::size_t j = 0; j < i; ++j) {
      if (features_[i] == features_[j]) {
        throw Error("extraction plan lists '" + features_[i].name() + "' twice");
      }
    }
  }
}

bool ExtractionPlan::contains(const SituationFeature& f) const {
  return std::find(features_.begin(), features_.end(), f) != features_.end();
}

std::vector<Situation> derive_situations(const EventLog& log,
                                         const std::optional<std::string>& anchor) {
  std::vector<Situation> out;
  const auto& traces = log.traces();
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const Trace& trace = traces[t];
    if (!anchor) {
      if (!trace.events.empty()) out.emplace_back(trace, t, trace.events.size());
      continue;
    }
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      if (trace.events[i].activity == *anchor) out.emplace_back(trace, t, i + 1);
    }
  }
  return out;
}

OptionalValue eval_feature(const SituationFeature& feature, const Situation& situation) {
  if (!feature.anchor) {
    const auto& attributes = situation.trace_attributes();
    auto it = attributes.find(feature.attribute);
    if (it == attributes.end()) return std::nullopt;
    return it->second;
  }
  const Event* latest = latest_event_with_activity(situation.events(), *feature.anchor);
  if (!latest) return std::nullopt;
  return latest->attribute(feature.attribute);
}

}  // namespace fairpm
