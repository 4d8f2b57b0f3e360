#pragma once

// Minimal owning XML tree used by the XES and PNML readers, plus an escaping
// writer. Not installed.

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fairpm::xml {

struct Element {
  std::string name;  // local name, namespace prefix stripped
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data
  std::size_t line = 0;

  std::optional<std::string_view> attribute(std::string_view key) const;
  const Element* child(std::string_view name) const;
  std::vector<const Element*> children_named(std::string_view name) const;
};

// Throws ParseError carrying line and column of the failure.
Element parse(std::istream& in);
Element parse(std::string_view document);

std::string escape(std::string_view text);

}  // namespace fairpm::xml
