#pragma once

#include <stdexcept>
#include <string>

namespace hypereig {

// Base of every library error. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid order, dimension, probability, permutation, or other argument.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Dense enumeration or exact integer arithmetic would exceed desk-scale limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Zero vector normalization, or v^{:k} too close to zero.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// Continuation could not follow an eigenvalue across a parameter interval.
class SingularityError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ExperimentError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypereig
