#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace infoverload {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A curve, trader or other model parameter lies outside its admissible domain.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical machinery could not produce a finite answer (bracket overflow, NaN).
class NumericRangeError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition (e.g. wrong cost family).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. `field()` is a dotted path such as `market.theta`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, std::string reason)
      : Error(field.empty() ? reason : field + ": " + reason),
        field_(std::move(field)),
        reason_(std::move(reason)) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// A property the model guarantees was observed to fail (never repaired).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace infoverload
