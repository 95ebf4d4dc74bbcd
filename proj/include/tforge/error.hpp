#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by `ChainRing::inv` on an element of positive valuation.
class NonUnit : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters, such as a composite p or an unparseable literal.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// An enumeration or brute-force search would exceed its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A postcondition that holds for every correct input failed; always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace tforge
