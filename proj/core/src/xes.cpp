#include "fairpm/xes.hpp"

#include <charconv>
#include <sstream>

#include "fairpm/error.hpp"
#include "fairpm/timestamp.hpp"
#include "xml.hpp"

namespace fairpm {
namespace {

std::optional<AttributeValue> read_typed(const xml::Element& element) {
  auto key = element.attribute("key");
  auto raw = element.attribute("value");
  const std::string& kind = element.name;
  if (kind == "list" || kind == "container") return std::nullopt;
  if (kind != "string" && kind != "id" && kind != "int" && kind != "float" &&
      kind != "boolean" && kind != "date") {
    return std::nullopt;
  }
  if (!key) throw ParseError("XES attribute <" + kind + "> without key", element.line, 1);
  std::string_view text = raw.value_or("");
  if (kind == "string" || kind == "id") return AttributeValue(std::string(text));
  if (kind == "int") {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParseError("XES int attribute '" + std::string(*key) + "' has value '" +
                           std::string(text) + "'",
                       element.line, 1);
    }
    return AttributeValue(v);
  }
  if (kind == "float") {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParseError("XES float attribute '" + std::string(*key) + "' has value '" +
                           std::string(text) + "'",
                       element.line, 1);
    }
    return AttributeValue(v);
  }
  if (kind == "boolean") {
    if (text == "true" || text == "1") return AttributeValue(true);
    if (text == "false" || text == "0") return AttributeValue(false);
    throw ParseError("XES boolean attribute '" + std::string(*key) + "' has value '" +
                         std::string(text) + "'",
                     element.line, 1);
  }
  auto time = parse_iso8601(text);
  if (!time) {
    throw ParseError("XES date attribute '" + std::string(*key) + "' has value '" +
                         std::string(text) + "'",
                     element.line, 1);
  }
  return AttributeValue(*time);
}

void read_attributes(const xml::Element& parent, AttributeMap& into) {
  for (const auto& child : parent.children) {
    if (auto value = read_typed(child)) {
      into.insert_or_assign(std::string(*child.attribute("key")), std::move(*value));
    }
  }
}

}  // namespace

EventLog parse_xes(std::string_view document, const XesReadOptions& options) {
  xml::Element root = xml::parse(document);
  if (root.name != "log") {
    throw ParseError("XES root element must be <log>, found <" + root.name + ">", root.line, 1);
  }
  AttributeMap log_attributes;
  read_attributes(root, log_attributes);

  std::vector<Trace> traces;
  for (const xml::Element* trace_element : root.children_named("trace")) {
    Trace trace;
    read_attributes(*trace_element, trace.attributes);
    std::uint32_t ordinal = 0;
    Timestamp last_seen{};
    for (const xml::Element* event_element : trace_element->children_named("event")) {
      Event event;
      read_attributes(*event_element, event.attributes);
      event.ordinal = ordinal++;
      auto name = event.attributes.find(kConceptName);
      if (name == event.attributes.end() || name->second.to_display().empty()) {
        throw ParseError("trace " + std::to_string(traces.size()) +
                             ": event without concept:name",
                         event_element->line, 1);
      }
      event.activity = name->second.to_display();
      event.attributes.erase(name);
      auto time = event.attributes.find(kTimeTimestamp);
      if (time != event.attributes.end() && time->second.tag() == ValueTag::kTimestamp) {
        event.time = time->second.as_timestamp();
        event.attributes.erase(time);
      } else if (options.synthesize_missing_timestamps) {
        event.time = last_seen;
      } else {
        throw ParseError("trace " + std::to_string(traces.size()) +
                             ": event without time:timestamp",
                         event_element->line, 1);
      }
      last_seen = event.time;
      trace.events.push_back(std::move(event));
    }
    traces.push_back(std::move(trace));
  }
  return EventLog(std::move(traces), std::move(log_attributes));
}

EventLog parse_xes(std::istream& in, const XesReadOptions& options) {
  std::string document{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_xes(std::string_view(document), options);
}

namespace {

void write_attribute(std::ostream& out, std::string_view indent, std::string_view key,
                     const AttributeValue& value) {
  const char* element = "string";
  switch (value.tag()) {
    case ValueTag::kText: element = "string"; break;
    case ValueTag::kInteger: element = "int"; break;
    case ValueTag::kReal: element = "float"; break;
    case ValueTag::kBoolean: element = "boolean"; break;
    case ValueTag::kTimestamp: element = "date"; break;
  }
  out << indent << '<' << element << " key=\"" << xml::escape(key) << "\" value=\""
      << xml::escape(value.to_display()) << "\"/>\n";
}

}  // namespace

void serialize_xes(const EventLog& log, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<log xes.version=\"1.0\" xes.features=\"nested-attributes\">\n";
  out << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
  out << "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
  out << "  <extension name=\"Organizational\" prefix=\"org\" uri=\"http://www.xes-standard.org/org.xesext\"/>\n";
  out << "  <extension name=\"Lifecycle\" prefix=\"lifecycle\" uri=\"http://www.xes-standard.org/lifecycle.xesext\"/>\n";
  for (const auto& [key, value] : log.attributes()) write_attribute(out, "  ", key, value);
  for (const Trace& trace : log.traces()) {
    out << "  <trace>\n";
    for (const auto& [key, value] : trace.attributes) write_attribute(out, "    ", key, value);
    for (const Event& event : trace.events) {
      out << "    <event>\n";
      write_attribute(out, "      ", kConceptName, AttributeValue(event.activity));
      write_attribute(out, "      ", kTimeTimestamp, AttributeValue(event.time));
      for (const auto& [key, value] : event.attributes) write_attribute(out, "      ", key, value);
      out << "    </event>\n";
    }
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

std::string serialize_xes(const EventLog& log) {
  std::ostringstream out;
  serialize_xes(log, out);
  return out.str();
}

}  // namespace fairpm
