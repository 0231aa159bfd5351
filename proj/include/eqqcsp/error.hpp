#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eqqcsp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A well-formed value that violates an operation's precondition
/// (wrong prefix shape, non-Horn clause, mixed-polarity clause, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap was exceeded before any work started.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A search ran out of its node budget. Never carries a verdict.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace eqqcsp
