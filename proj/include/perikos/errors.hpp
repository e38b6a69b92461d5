#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace perikos {

/// Operands live over different primes, fields, heights or variable counts.
class ParameterMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the domain of an operation (radius, tag, rank...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The supplied precision does not determine the requested quantity.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, std::int64_t achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Best absolute precision (or agreement level) reached before giving up.
  std::int64_t achieved() const noexcept { return achieved_; }

 private:
  std::int64_t achieved_;
};

/// An adaptive limit did not stabilise within its iteration cap.
class ConvergenceError : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

}  // namespace perikos
