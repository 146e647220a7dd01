#pragma once

#include <stdexcept>
#include <string>

namespace gammalab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// tau violates 1 + tau * lambda > 0, or a stricter bound required by the caller.
class InadmissibleStep : public Error {
 public:
  using Error::Error;
};

// Point outside D(f) or D(∂f) where the operation needs membership.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace gammalab
