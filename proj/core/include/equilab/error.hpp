#pragma once

#include <stdexcept>
#include <string>

namespace equilab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed configuration, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Base for failures of a numerical procedure on valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFrequency : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonTermination : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedInitialData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnboundedG : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace equilab
