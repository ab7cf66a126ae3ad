#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geooutage {

/// A lexical form that does not match its grammar (timestamps, FIPS codes).
class LexicalError : public std::runtime_error {
 public:
  LexicalError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Invalid or inconsistent input data (bad headers, dimension mismatches, unknown counties).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in Turtle or query text, with a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A syntactically valid query that violates a static rule (e.g. a selected
/// variable that never occurs in the graph pattern).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geooutage
