#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "fairpm/attribute.hpp"
#include "fairpm/labels.hpp"
#include "fairpm/situation.hpp"

namespace fairpm {

// Values in `deprived_values` map to the deprived group, everything else to
// the favorable group. Matching is tag-exact.
struct SensitiveBinarizer {
  SituationFeature feature;
  std::set<AttributeValue, ValueOrder> deprived_values;

  Group operator()(const AttributeValue& value) const;
};

enum class Orientation { kGreater, kLess };

// Numeric rule: a value on the `undesirable_if` side of the threshold is
// labelled -, everything else +.
struct ThresholdRule {
  double value = 0.0;
  Orientation undesirable_if = Orientation::kGreater;
};

struct ClassBinarizer {
  SituationFeature feature;
  std::variant<std::set<AttributeValue, ValueOrder>, ThresholdRule> rule;

  // Empty for non-numeric values under a threshold rule.
  std::optional<Label> operator()(const AttributeValue& value) const;
};

struct SituationSpecification {
  ExtractionPlan plan;
  SensitiveBinarizer sensitive;
  ClassBinarizer label;
  double epsilon = 0.05;
  RelabelMode relabel_mode = RelabelMode::kBoth;

  // Throws Error if sensitive or class feature is in the plan, they
  // coincide, deprived values are empty, or epsilon is outside [0, 1].
  void validate() const;
};

// JSON layout:
// { "plan": [{"anchor": string|null, "attribute": string}, ...],
//   "sensitive": {"anchor", "attribute", "deprived_values": [...]},
//   "class": {"anchor", "attribute",
//             "positive_values": [...] | "threshold": {"value", "delayed_if": "gt"|"lt"}},
//   "epsilon": number, "relabel_mode": "both"|"neg_to_pos"|"pos_to_neg" }
SituationSpecification parse_specification(std::string_view json);
std::string specification_to_json(const SituationSpecification& spec);

}  // namespace fairpm
