#pragma once

#include <stdexcept>
#include <string>

namespace entroplane {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class TraceNotOne : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exceeded its recursion budget.
class MaxDepth : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// State-family parameters violating a positivity or simplex condition.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

/// No E0 state realises the requested (concurrence, linear entropy) pair.
class NoLevelSet : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; the message carries line and field positions.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int field)
      : Error(what), line_(line), field_(field) {}
  int line() const noexcept { return line_; }
  int field() const noexcept { return field_; }

 private:
  int line_;
  int field_;
};

}  // namespace entroplane
