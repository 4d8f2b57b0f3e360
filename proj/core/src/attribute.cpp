#include "fairpm/attribute.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "fairpm/timestamp.hpp"

namespace fairpm {

std::string_view to_string(ValueTag tag) {
  switch (tag) {
    case ValueTag::kText: return "text";
    case ValueTag::kInteger: return "integer";
    case ValueTag::kReal: return "real";
    case ValueTag::kBoolean: return "boolean";
    case ValueTag::kTimestamp: return "timestamp";
  }
  return "?";
}

bool AttributeValue::is_numeric() const {
  auto t = tag();
  return t == ValueTag::kInteger || t == ValueTag::kReal || t == ValueTag::kTimestamp;
}

std::optional<double> AttributeValue::numeric() const {
  switch (tag()) {
    case ValueTag::kInteger: return static_cast<double>(as_integer());
    case ValueTag::kReal: return as_real();
    case ValueTag::kTimestamp: return static_cast<double>(as_timestamp().millis);
    default: return std::nullopt;
  }
}

std::string AttributeValue::to_display() const {
  switch (tag()) {
    case ValueTag::kText: return as_text();
    case ValueTag::kInteger: return std::to_string(as_integer());
    case ValueTag::kReal: {
      char buffer[64];
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), as_real());
      return std::string(buffer, end);
    }
    case ValueTag::kBoolean: return as_boolean() ? "true" : "false";
    case ValueTag::kTimestamp: return format_iso8601(as_timestamp());
  }
  return {};
}

bool operator==(const AttributeValue& a, const AttributeValue& b) {
  return a.value_ == b.value_;
}

std::partial_ordering compare(const AttributeValue& a, const AttributeValue& b) {
  if (a.tag() != b.tag()) return std::partial_ordering::unordered;
  return std::visit(
      [&](const auto& lhs) -> std::partial_ordering {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.storage());
        return lhs <=> rhs;
      },
      a.storage());
}

bool ValueOrder::operator()(const AttributeValue& a, const AttributeValue& b) const {
  if (a.tag() != b.tag()) return a.tag() < b.tag();
  if (a.tag() == ValueTag::kReal) {
    // Total order on doubles so NaN keys stay well-behaved.
    double x = a.as_real(), y = b.as_real();
    if (std::isnan(x) || std::isnan(y)) return !std::isnan(x) && std::isnan(y);
    return x < y;
  }
  return compare(a, b) == std::partial_ordering::less;
}

AttributeValue infer_value(std::string_view text) {
  if (text == "true" || text == "TRUE" || text == "True") return AttributeValue(true);
  if (text == "false" || text == "FALSE" || text == "False") return AttributeValue(false);
  const char* first = text.data();
  const char* last = first + text.size();
  std::int64_t integer = 0;
  if (auto [ptr, ec] = std::from_chars(first, last, integer); ec == std::errc{} && ptr == last) {
    return AttributeValue(integer);
  }
  double real = 0;
  if (auto [ptr, ec] = std::from_chars(first, last, real); ec == std::errc{} && ptr == last) {
    return AttributeValue(real);
  }
  if (auto time = parse_iso8601(text)) return AttributeValue(*time);
  return AttributeValue(std::string(text));
}

}  // namespace fairpm
