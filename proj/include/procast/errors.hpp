#pragma once

#include <stdexcept>
#include <string>

namespace procast {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input (XML, CSV, rule text, config). Carries a 1-based
/// line/column when the format has one.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line = 0, std::size_t col = 0)
      : Error(format(msg, line, col)), line_(line), col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t col) {
    if (line == 0) return msg;
    std::string out = "line " + std::to_string(line);
    if (col > 0) out += ", col " + std::to_string(col);
    return out + ": " + msg;
  }
  std::size_t line_;
  std::size_t col_;
};

/// A rule failed a static check (open formula, kind conflict, incoherent targets).
class StaticCheckError : public Error {
public:
  using Error::Error;
};

/// Raised when evaluation hits a state static checks should have excluded
/// (e.g. an unbound index variable).
class EvalError : public Error {
public:
  using Error::Error;
};

/// Violated domain contract: non-well-defined rule, empty dataset,
/// algorithm/kind mismatch, schema-hash mismatch, k out of range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Bad run configuration or unusable referenced file.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace procast
