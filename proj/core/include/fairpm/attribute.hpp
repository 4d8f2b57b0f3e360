#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace fairpm {

// Milliseconds since the Unix epoch, UTC.
struct Timestamp {
  std::int64_t millis = 0;

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

enum class ValueTag { kText, kInteger, kReal, kBoolean, kTimestamp };

std::string_view to_string(ValueTag tag);

// A single attribute value. Ordering between values is only meaningful when
// both carry the same tag; see `compare`.
class AttributeValue {
 public:
  using Storage =
      std::variant<std::string, std::int64_t, double, bool, Timestamp>;

  AttributeValue() = default;
  AttributeValue(std::string text) : value_(std::move(text)) {}
  AttributeValue(const char* text) : value_(std::string(text)) {}
  AttributeValue(std::int64_t integer) : value_(integer) {}
  AttributeValue(int integer) : value_(static_cast<std::int64_t>(integer)) {}
  AttributeValue(double real) : value_(real) {}
  AttributeValue(bool boolean) : value_(boolean) {}
  AttributeValue(Timestamp time) : value_(time) {}

  ValueTag tag() const { return static_cast<ValueTag>(value_.index()); }

  bool is_text() const { return tag() == ValueTag::kText; }
  bool is_numeric() const;

  const std::string& as_text() const { return std::get<std::string>(value_); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(value_); }
  double as_real() const { return std::get<double>(value_); }
  bool as_boolean() const { return std::get<bool>(value_); }
  Timestamp as_timestamp() const { return std::get<Timestamp>(value_); }

  // Numeric view of integer, real and timestamp values.
  std::optional<double> numeric() const;

  // Human readable rendering; reals use the shortest round-trip form,
  // timestamps ISO-8601 UTC.
  std::string to_display() const;

  const Storage& storage() const { return value_; }

  // Same tag and same payload. Reals compare bitwise-equal values (NaN
  // never equals itself).
  friend bool operator==(const AttributeValue& a, const AttributeValue& b);

 private:
  Storage value_;
};

// Ordering defined only between values of the same tag; unordered otherwise.
std::partial_ordering compare(const AttributeValue& a, const AttributeValue& b);

// Strict weak ordering over all values (tag first, then payload), used to key
// ordered containers. Not a semantic comparison.
struct ValueOrder {
  bool operator()(const AttributeValue& a, const AttributeValue& b) const;
};

using OptionalValue = std::optional<AttributeValue>;
using AttributeMap = std::map<std::string, AttributeValue, std::less<>>;

// Guesses the most specific tag for a textual cell: boolean, integer, real,
// ISO-8601 timestamp, then text.
AttributeValue infer_value(std::string_view text);

}  // namespace fairpm
