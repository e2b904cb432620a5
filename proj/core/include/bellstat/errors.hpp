#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellstat {

// Base class for all bellstat errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: bad header, bad field, wrong row shape.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : Error(message) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

// A value violates a domain-type invariant (negative count, non-finite angle, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Block or series shape is wrong: missing/duplicate setting pair, empty series.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Cross-field count consistency violated: singles below coincidences, or the
// singles decomposition of a four-detector table does not hold.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Operation requires four-detector outcome data the record does not carry.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Ratio statistic undefined: zero singles denominator.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

// Drift normalization impossible: zero proxy singles in some run.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Too few blocks for the requested estimator.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Estimator degenerate: zero spread where a spread is required.
class DegenerateStatisticsError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace bellstat
