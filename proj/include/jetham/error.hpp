#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetham {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a derivation was violated (wrong chart, bad table, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Expression growth exceeded the configured term cap.
class LimitError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  lexical,
  syntax,
  unknown_coordinate,
  undeclared_parameter,
  arity_mismatch,
  malformed_arithmetic,
  semantic,
};

/// Positioned error from the expression parser or the model-file parser.
/// Line and column are 1-based; line 0 means "inside a single expression".
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string message,
             std::string hint = {})
      : Error(format(line, column, message, hint)),
        kind_(kind),
        line_(line),
        column_(column),
        message_(std::move(message)),
        hint_(std::move(hint)) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& hint() const noexcept { return hint_; }

  /// Re-anchor an error raised inside an embedded expression.
  ParseError relocated(std::size_t line, std::size_t column_offset) const {
    return ParseError(kind_, line, column_ + column_offset, message_, hint_);
  }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message,
                            const std::string& hint) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!hint.empty()) out += " (hint: " + hint + ")";
    return out;
  }

  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::string hint_;
};

}  // namespace jetham
