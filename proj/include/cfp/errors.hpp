#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfp {

/// A point or value outside the domain of a map, space or expression.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Map-definition syntax or consistency error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cfp
