#pragma once

#include <stdexcept>
#include <string>

namespace depsynt {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BddError : public Error {
 public:
  using Error::Error;
};

// Raised by the spec front-end; carries a 1-based source position.
class SpecError : public Error {
 public:
  SpecError(const std::string& msg, int line, int column)
      : Error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg : msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class HoaError : public Error {
 public:
  using Error::Error;
};

class AigerError : public Error {
 public:
  using Error::Error;
};

// A configurable state/alphabet cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

// An algorithmic invariant did not hold, e.g. a supposedly dependent output
// admits two values on one transition.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace depsynt
