#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rvar {

// Argument outside the domain of a function or model (exit code 2 in the CLI).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested level cannot be reached by the conditional distribution.
class InfeasibleLevel : public DomainError {
 public:
  using DomainError::DomainError;
};

// Fixed coordinate lies outside the band where an orthant measure is defined.
class BandViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

// Integration range collapsed to (numerically) zero width.
class DegenerateRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class ZeroDensity : public DomainError {
 public:
  using DomainError::DomainError;
};

// Input violates a structural assumption (e.g. a class that is not comonotonic).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed input data; carries the 1-based line number of the offending record.
class DataError : public std::runtime_error {
 public:
  DataError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rvar
