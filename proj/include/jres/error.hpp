#pragma once

#include <stdexcept>
#include <string>

namespace jres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its legal range (variance <= 0, kappa <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Structured input failed validation (non-Hermitian matrix, a_j <= 0, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Sizes or point counts do not match what the operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not converge or a stencil degenerated.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input is outside the image of real Jacobi data (gc_inverse, k_from_lstar).
class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

/// Requested variant exists in principle but is not implemented (dense beta=4).
class UnsupportedVariant : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a map (joukowsky(0)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root conjugate pairing failed; indicates a root-finder problem.
class AsymmetryError : public Error {
 public:
  using Error::Error;
};

}  // namespace jres
