#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdgi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (step <= 0, k < 1, unknown name, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An elevation would not fit the storage type.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Input text could not be parsed. Carries a 1-based line and column; column 0
/// means the whole line.
class ParseError : public Error {
 public:
  enum class Kind {
    kMalformedHeader,
    kCellCount,
    kNonNumeric,
    kAllNoData,
    kBadValue,
  };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
      : Error(format(line, column, what)), kind_(kind), line_(line), column_(column) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& what) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mdgi
