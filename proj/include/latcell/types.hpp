#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace latcell {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using IVec3 = Eigen::Vector3i;

/// Bad input: malformed scenes, inconsistent arguments. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure during an otherwise valid computation (e.g. a
/// non-invertible deformation). CLI exit code 1.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class BoundaryRule { Closed, HalfOpen };

inline const char* to_string(BoundaryRule r) {
  return r == BoundaryRule::Closed ? "closed" : "halfopen";
}

}  // namespace latcell
