// Copyright 2026 The srsik Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRSIK_TYPES_HPP_
#define SRSIK_TYPES_HPP_

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>
#include <string>

namespace srsik {

inline constexpr int kDof = 7;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using JointVector = Eigen::Matrix<double, kDof, 1>;
/// Rows 0-2 linear part (m/rad), rows 3-5 angular part.
using Jacobian = Eigen::Matrix<double, 6, kDof>;
using Twist = Eigen::Matrix<double, 6, 1>;

/// Rigid transform of the tool frame in the base frame.
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 p = Vec3::Zero();

  /// Orthonormal with det +1 within `tol`.
  [[nodiscard]] bool is_valid(double tol = 1e-9) const;
};

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kIo,
  kUnreachable,
  kNoFeasibleTarget,
  kGeometryMismatch,
  kTrainingDiverged,
  kModelMismatch,
};

[[nodiscard]] const char* to_string(ErrorCode code);

/// Domain and usage failures. Numerical degeneracies are reported through
/// flags on results instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace srsik

#endif  // SRSIK_TYPES_HPP_
