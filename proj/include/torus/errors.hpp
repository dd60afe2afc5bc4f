#pragma once

#include <stdexcept>
#include <string>

namespace torus {

/// An orbit or tangent computation produced a non-finite value.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search exceeded its iteration or magnitude cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// det(Df) never vanishes for this amplitude family.
class NoCriticalValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace torus
