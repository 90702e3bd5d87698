#pragma once

#include <stdexcept>
#include <string>

namespace entcum {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different variable contexts ({m, alpha} vs {m, n}).
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// A denominator vanished at the requested evaluation point.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Caller supplied an argument outside the documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal structural invariant failed. These indicate a bug, never bad
/// input, and the CLI maps them to exit code 3.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace entcum
