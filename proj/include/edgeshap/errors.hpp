#pragma once

#include <stdexcept>
#include <string>

namespace edgeshap {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node, edge or fixture name that does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Player count exceeds what an engine is willing to enumerate.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A characteristic function or game breaks a precondition of the engine
/// (non-zero empty coalition, non-zero-normalized singleton, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an operation (zero samples, bad exponent, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A route whose node set induces no edge of the graph.
class DegenerateRouteError : public Error {
 public:
  using Error::Error;
};

/// Malformed graph, route table or scenario document.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a scenario document, with 1-based position.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace edgeshap
