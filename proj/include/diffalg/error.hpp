#pragma once

#include <stdexcept>
#include <string>

namespace diffalg {

enum class ErrorKind {
  syntax,                    // malformed input text
  validation,                // well-formed but invalid input (bad index, bad file)
  incompatible_context,      // operands from different rank/field/mode/ring
  unsupported_characteristic,
  unsupported_mode,
  zero_operator,
  out_of_range,
};

/// Every failure raised by the library is an Error carrying a kind, so the
/// C API and the CLI can map it onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  /// Mathematical precondition violations (as opposed to bad input).
  bool is_precondition() const noexcept {
    return kind_ == ErrorKind::unsupported_characteristic || kind_ == ErrorKind::unsupported_mode ||
           kind_ == ErrorKind::zero_operator;
  }

 private:
  ErrorKind kind_;
};

/// Syntax error with a 1-based line/column position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(ErrorKind::syntax, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace diffalg
