#pragma once

#include <stdexcept>
#include <string>

namespace sitnikov {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition. Nothing was computed.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The computation started but could not produce a certified result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public DomainError {
 public:
  using DomainError::DomainError;
};

class EccentricityOutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class VelocityOutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class EnergyOutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class PeriodNotAttainable : public DomainError {
 public:
  using DomainError::DomainError;
};

class InadmissibleFrequency : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionViolated : public DomainError {
 public:
  using DomainError::DomainError;
};

class DeterminantViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

class StepLimitExceeded : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class NonFiniteState : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class EventNotFound : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class NewtonDiverged : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace sitnikov
