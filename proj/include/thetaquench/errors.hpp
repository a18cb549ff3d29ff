#pragma once

#include <stdexcept>
#include <string>

namespace tq {

/// Bad input: malformed configuration, violated preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to reach its stated accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A winding path or plaquette touched a node whose amplitude vanishes.
class SingularNodeError : public NumericalError {
 public:
  SingularNodeError(const std::string& what, long t_index, long k_index)
      : NumericalError(what), t_index(t_index), k_index(k_index) {}
  long t_index;
  long k_index;
};

/// Plaquette charge |q| > 1: the grid does not resolve the vortices.
class GridTooCoarseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tq
