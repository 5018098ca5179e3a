// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace fsgd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or inputs outside the documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A stream/file could not be parsed; `line` is 1-based where known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = 0) : Error(what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

// The estimator produced a non-finite value; `step` is the failing index.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace fsgd
