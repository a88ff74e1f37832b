#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace t2lift {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Lexical/grammatical failure; position is a 0-based byte offset into the input.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
public:
  UnknownIdentifierError(const std::string& name, std::size_t position)
      : ParseError("unknown identifier '" + name + "'", position), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

class NonIntegerExponentError : public ParseError {
public:
  explicit NonIntegerExponentError(std::size_t position)
      : ParseError("exponent must be an integer", position) {}
};

class UnboundVariableError : public Error {
public:
  explicit UnboundVariableError(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

// Evaluation hit a pole (division by zero or a non-finite intermediate).
class SingularPointError : public Error {
public:
  using Error::Error;
};

// Symbolic division by an expression that canonicalizes to zero.
class ZeroDivisionError : public Error {
public:
  using Error::Error;
};

// Expression exceeded the configured node budget.
class ResourceError : public Error {
public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
public:
  using Error::Error;
};

class ChartMismatchError : public Error {
public:
  using Error::Error;
};

// Sampler could not place the requested number of non-singular points.
class SamplingError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace t2lift
