#pragma once

#include <stdexcept>
#include <string>

namespace warpgap {

// Raised when the warping profile cannot be assembled from its parameters.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a sampling request has no admissible point.
class EmptySampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the banded Cholesky factorization on a nonpositive pivot.
class NotSpdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a grid does not satisfy a resolution or alignment precondition.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a tail envelope fails its dominance check.
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace warpgap
