#pragma once

#include <stdexcept>
#include <string>

namespace paneitz {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation (n < 5, a > alpha^2/4, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The quadratic x^2 - alpha x + a has no real roots.
class FactorizationError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Missing files, malformed input files, bad user input.
class InputError : public DomainError {
public:
  using DomainError::DomainError;
};

/// A numerical procedure failed to deliver a certified result.
class NumericalError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, double last_residual)
      : NumericalError(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

class PositivityError : public NumericalError {
public:
  PositivityError(const std::string& what, double min_value)
      : NumericalError(what), min_value_(min_value) {}
  double min_value() const noexcept { return min_value_; }

private:
  double min_value_;
};

}  // namespace paneitz
