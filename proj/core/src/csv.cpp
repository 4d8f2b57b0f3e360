#include "fairpm/csv.hpp"

#include <iterator>

#include "fairpm/error.hpp"

namespace fairpm::csv {

std::vector<Row> read(std::string_view text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (row_has_content || row.size() > 1 || !row.front().empty()) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        quote_line = line;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw ParseError("CSV: unterminated quoted field", quote_line, 1);
  if (!field.empty() || !row.empty() || row_has_content) end_row();
  return rows;
}

std::vector<Row> read(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return read(std::string_view(text));
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quote(row[i]);
  }
  out << '\n';
}

}  // namespace fairpm::csv
