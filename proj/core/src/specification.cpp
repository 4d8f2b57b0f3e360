#include "fairpm/specification.hpp"

#include <nlohmann/json.hpp>

#include "fairpm/error.hpp"

namespace fairpm {

using nlohmann::json;

Group SensitiveBinarizer::operator()(const AttributeValue& value) const {
  return deprived_values.contains(value) ? Group::kDeprived : Group::kFavorable;
}

std::optional<Label> ClassBinarizer::operator()(const AttributeValue& value) const {
  if (const auto* positives = std::get_if<std::set<AttributeValue, ValueOrder>>(&rule)) {
    return positives->contains(value) ? Label::kPositive : Label::kNegative;
  }
  const auto& threshold = std::get<ThresholdRule>(rule);
  auto number = value.numeric();
  if (!number) return std::nullopt;
  bool undesirable = threshold.undesirable_if == Orientation::kGreater ? *number > threshold.value
                                                                        : *number < threshold.value;
  return undesirable ? Label::kNegative : Label::kPositive;
}

void SituationSpecification::validate() const {
  if (plan.contains(sensitive.feature)) {
    throw Error("sensitive feature '" + sensitive.feature.name() + "' must not be in the plan");
  }
  if (plan.contains(label.feature)) {
    throw Error("class feature '" + label.feature.name() + "' must not be in the plan");
  }
  if (sensitive.feature == label.feature) throw Error("sensitive and class feature coincide");
  if (sensitive.deprived_values.empty()) throw Error("deprived value set is empty");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error("epsilon must lie in [0, 1]");
}

namespace {

AttributeValue value_from_json(const json& j) {
  if (j.is_string()) return AttributeValue(j.get<std::string>());
  if (j.is_boolean()) return AttributeValue(j.get<bool>());
  if (j.is_number_integer()) return AttributeValue(j.get<std::int64_t>());
  if (j.is_number()) return AttributeValue(j.get<double>());
  throw Error("specification: values must be strings, numbers or booleans");
}

json value_to_json(const AttributeValue& v) {
  switch (v.tag()) {
    case ValueTag::kText: return v.as_text();
    case ValueTag::kInteger: return v.as_integer();
    case ValueTag::kReal: return v.as_real();
    case ValueTag::kBoolean: return v.as_boolean();
    case ValueTag::kTimestamp: return v.to_display();
  }
  return nullptr;
}

SituationFeature feature_from_json(const json& j, std::string_view where) {
  if (!j.is_object() || !j.contains("attribute") || !j["attribute"].is_string()) {
    throw Error("specification: " + std::string(where) + " needs a string 'attribute'");
  }
  SituationFeature f;
  f.attribute = j["attribute"].get<std::string>();
  if (j.contains("anchor") && !j["anchor"].is_null()) {
    if (!j["anchor"].is_string()) throw Error("specification: anchor must be a string or null");
    f.anchor = j["anchor"].get<std::string>();
  }
  return f;
}

json feature_to_json(const SituationFeature& f) {
  json j;
  j["anchor"] = f.anchor ? json(*f.anchor) : json(nullptr);
  j["attribute"] = f.attribute;
  return j;
}

}  // namespace

SituationSpecification parse_specification(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("specification JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("specification: top level must be an object");
  for (const char* key : {"plan", "sensitive", "class"}) {
    if (!j.contains(key)) throw Error(std::string("specification: missing '") + key + "'");
  }
  if (!j["plan"].is_array()) throw Error("specification: 'plan' must be an array");
  std::vector<SituationFeature> features;
  for (const auto& f : j["plan"]) features.push_back(feature_from_json(f, "plan entry"));

  const json& s = j["sensitive"];
  SensitiveBinarizer sensitive{feature_from_json(s, "sensitive"), {}};
  if (!s.contains("deprived_values") || !s["deprived_values"].is_array()) {
    throw Error("specification: sensitive needs a 'deprived_values' array");
  }
  for (const auto& v : s["deprived_values"]) sensitive.deprived_values.insert(value_from_json(v));

  const json& c = j["class"];
  ClassBinarizer label{feature_from_json(c, "class"), {}};
  if (c.contains("positive_values") == c.contains("threshold")) {
    throw Error("specification: class needs exactly one of 'positive_values' or 'threshold'");
  }
  if (c.contains("positive_values")) {
    std::set<AttributeValue, ValueOrder> positives;
    for (const auto& v : c["positive_values"]) positives.insert(value_from_json(v));
    label.rule = std::move(positives);
  } else {
    const json& t = c["threshold"];
    if (!t.contains("value") || !t["value"].is_number()) {
      throw Error("specification: threshold needs a numeric 'value'");
    }
    ThresholdRule rule;
    rule.value = t["value"].get<double>();
    std::string side = t.value("delayed_if", std::string("gt"));
    if (side == "gt") {
      rule.undesirable_if = Orientation::kGreater;
    } else if (side == "lt") {
      rule.undesirable_if = Orientation::kLess;
    } else {
      throw Error("specification: delayed_if must be 'gt' or 'lt'");
    }
    label.rule = rule;
  }

  SituationSpecification spec{ExtractionPlan(std::move(features)), std::move(sensitive),
                              std::move(label)};
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number()) throw Error("specification: epsilon must be a number");
    spec.epsilon = j["epsilon"].get<double>();
  }
  if (j.contains("relabel_mode")) spec.relabel_mode = parse_relabel_mode(j["relabel_mode"].get<std::string>());
  spec.validate();
  return spec;
}

std::string specification_to_json(const SituationSpecification& spec) {
  json j;
  j["plan"] = json::array();
  for (const auto& f : spec.plan.features()) j["plan"].push_back(feature_to_json(f));
  j["sensitive"] = feature_to_json(spec.sensitive.feature);
  j["sensitive"]["deprived_values"] = json::array();
  for (const auto& v : spec.sensitive.deprived_values) {
    j["sensitive"]["deprived_values"].push_back(value_to_json(v));
  }
  j["class"] = feature_to_json(spec.label.feature);
  if (const auto* positives = std::get_if<std::set<AttributeValue, ValueOrder>>(&spec.label.rule)) {
    j["class"]["positive_values"] = json::array();
    for (const auto& v : *positives) j["class"]["positive_values"].push_back(value_to_json(v));
  } else {
    const auto& rule = std::get<ThresholdRule>(spec.label.rule);
    j["class"]["threshold"] = {{"value", rule.value},
                               {"delayed_if", rule.undesirable_if == Orientation::kGreater ? "gt" : "lt"}};
  }
  j["epsilon"] = spec.epsilon;
  j["relabel_mode"] = std::string(to_string(spec.relabel_mode));
  return j.dump(2);
}

}  // namespace fairpm
