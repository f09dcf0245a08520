#pragma once

#include <stdexcept>
#include <string>

namespace crt {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvexRing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointOutsideCell : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointOnBoundaryOrOutside : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CflViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsViolatedByLowOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedCombination : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace crt
