#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace passgp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or inconsistent configuration supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Numerical breakdown. `index()` names the offending site or query, or -1.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, long index = -1)
      : Error(index >= 0 ? what + " (index " + std::to_string(index) + ")" : what),
        index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

class FactorizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace passgp
