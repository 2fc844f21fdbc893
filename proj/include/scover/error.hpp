#pragma once

#include <stdexcept>
#include <string>

namespace scover {

// Base error for every failure surfaced by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure while reading one of the line-oriented document formats or a CSV
// file. Carries the 1-based line (and column, when known) of the offending
// token.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int column = 0)
      : Error(format(msg, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  static std::string format(const std::string& msg, int line, int column) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    out += ": " + msg;
    return out;
  }

  int line_;
  int column_;
};

} // namespace scover
