#include "fairpm/error.hpp"

namespace fairpm {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(line == 0 ? message
                      : message + " (line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

}  // namespace fairpm
