#pragma once

#include <stdexcept>
#include <string>

namespace dsub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad dimension, bad tolerance).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two subspaces live in different ambient spaces, or an operation needing
/// equal subspace dimensions received unequal ones.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A trivial (zero-dimensional) subspace was passed where a nontrivial one is
/// required.
class TrivialSubspace : public Error {
 public:
  using Error::Error;
};

/// Subspace projection onto a subspace (nearly) orthogonal to the input.
class ProjectionIllDefined : public Error {
 public:
  using Error::Error;
};

/// A point-cloud frame whose centered coordinates are all zero.
class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

/// A floating-point result left its mathematically admissible range by more
/// than rounding can explain.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsub
