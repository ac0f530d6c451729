#pragma once

#include <stdexcept>
#include <string>

namespace stocheck {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: unparsable files, bad dimensions in user data, unknown options.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Request outside the domain of an operation (valid input, invalid query).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to deliver its contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IndexBeyondSchedule : public DomainError {
 public:
  using DomainError::DomainError;
};

class WindowTooLarge : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoControlChannel : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotTimeInvariant : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotPeriodic : public DomainError {
 public:
  using DomainError::DomainError;
};

class ModeMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, long long t_max)
      : NumericalError(what), t_max_(t_max) {}
  long long t_max() const { return t_max_; }

 private:
  long long t_max_;
};

class MonotonicityViolated : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularPeriodMap : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace stocheck
