// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace chcert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-domain argument, violated precondition, malformed instance.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested quantity is undefined for these parameters (e.g. C3 with q >= 1).
class InvalidRequestError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedTransformError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or incomplete run configuration; the message starts with the field path.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Failures of the numerical machinery itself.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An integrand or objective produced NaN (or inf where not allowed).
class EvaluationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoRootError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BudgetExceededError : public NumericalError {
 public:
  BudgetExceededError(const std::string& what, double best_estimate, double error_estimate)
      : NumericalError(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// W(t) = +inf for some interior t: the inequality cannot hold with a finite constant.
class PathologicalWeightError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateInstanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace chcert
