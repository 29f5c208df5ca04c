#pragma once

#include <stdexcept>
#include <string>

namespace dde {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-sorted term or formula construction.
class SortError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Event-calculus domain cannot be compiled or simulated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inference schema definition is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line = 0, int column = 0)
      : Error(format(message, line, column)), message_(std::move(message)), line_(line), column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& m, int line, int column) {
    if (line <= 0) return m;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + m;
  }

  std::string message_;
  int line_;
  int column_;
};

}  // namespace dde
