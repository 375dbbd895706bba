#pragma once

#include <stdexcept>
#include <string>

namespace corrgamma {

/// Argument outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested distribution collapses to a point mass (e.g. a difference at rho = 1).
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative numerics failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix factorization failed (not positive definite or too close to singular).
class DecompositionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corrgamma
