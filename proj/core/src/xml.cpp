#include "xml.hpp"

#include <algorithm>
#include <boost/property_tree/detail/rapidxml.hpp>
#include <iterator>

#include "fairpm/error.hpp"

namespace fairpm::xml {
namespace rx = boost::property_tree::detail::rapidxml;

std::optional<std::string_view> Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

const Element* Element::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.name == child_name) out.push_back(&c);
  }
  return out;
}

namespace {

std::string local_name(std::string_view qualified) {
  auto colon = qualified.find(':');
  return std::string(colon == std::string_view::npos ? qualified : qualified.substr(colon + 1));
}

class LineIndex {
 public:
  explicit LineIndex(const std::vector<char>& buffer) {
    for (std::size_t i = 0; i < buffer.size(); ++i) {
      if (buffer[i] == '\n') newlines_.push_back(i);
    }
  }

  std::pair<std::size_t, std::size_t> locate(std::size_t offset) const {
    auto it = std::lower_bound(newlines_.begin(), newlines_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - newlines_.begin()) + 1;
    std::size_t line_start = it == newlines_.begin() ? 0 : *std::prev(it) + 1;
    return {line, offset - line_start + 1};
  }

 private:
  std::vector<std::size_t> newlines_;
};

Element convert(const rx::xml_node<char>* node, const char* base, const LineIndex& index) {
  Element out;
  out.name = local_name({node->name(), node->name_size()});
  out.line = index.locate(static_cast<std::size_t>(node->name() - base)).first;
  for (auto* a = node->first_attribute(); a; a = a->next_attribute()) {
    out.attributes.emplace_back(local_name({a->name(), a->name_size()}),
                                std::string(a->value(), a->value_size()));
  }
  for (auto* c = node->first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_element) {
      out.children.push_back(convert(c, base, index));
    } else if (c->type() == rx::node_data || c->type() == rx::node_cdata) {
      out.text.append(c->value(), c->value_size());
    }
  }
  return out;
}

Element parse_buffer(std::vector<char> buffer) {
  buffer.push_back('\0');
  // In-situ parsing rewrites the buffer, so lines are indexed up front.
  LineIndex index(buffer);
  rx::xml_document<char> doc;
  try {
    doc.parse<rx::parse_validate_closing_tags | rx::parse_trim_whitespace>(buffer.data());
  } catch (const rx::parse_error& e) {
    auto [line, column] = index.locate(static_cast<std::size_t>(e.where<char>() - buffer.data()));
    throw ParseError(std::string("malformed XML: ") + e.what(), line, column);
  }
  const rx::xml_node<char>* root = nullptr;
  for (auto* c = doc.first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_element) {
      if (root) throw ParseError("malformed XML: multiple root elements");
      root = c;
    }
  }
  if (!root) throw ParseError("malformed XML: no root element");
  return convert(root, buffer.data(), index);
}

}  // namespace

Element parse(std::istream& in) {
  std::vector<char> buffer{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_buffer(std::move(buffer));
}

Element parse(std::string_view document) {
  return parse_buffer(std::vector<char>(document.begin(), document.end()));
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace fairpm::xml
