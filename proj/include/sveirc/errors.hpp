#pragma once

#include <stdexcept>
#include <string>

namespace sveirc {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter or argument lies outside its documented domain.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// A state vector contains NaN/Inf or violates nonnegativity.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Step-size underflow: the problem looks stiff to the explicit stepper.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

// A component crossed the negativity floor; the exact flow is nonnegative,
// so this indicates integrator failure.
class NegativityError : public Error {
 public:
  using Error::Error;
};

// Denominator Z of the endemic elimination vanished or went negative.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Requested criticality data but no positive critical contact rate exists.
class NoCriticalBetaError : public Error {
 public:
  using Error::Error;
};

// An iterative solver (root polish, least squares) failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Free parameter outside the positive domain of the fit.
class DomainError : public Error {
 public:
  using Error::Error;
};

// File or schema problems in loaders/writers.
class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace sveirc
