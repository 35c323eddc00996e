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

/**
 * @file kinematics.hpp
 * @brief Forward kinematics, Jacobian and manipulability of the S-R-S chain.
 *
 * Frame i+1 is reached from frame i by a translation along a local axis, a
 * constant rotation, and the joint rotation Rz(q_{i+1}):
 *
 *   0->1  Tz(d1)                       Rz(q1)
 *   1->2  Tz(d2) Rz(-pi) Rx(pi/2)      Rz(q2)
 *   2->3  Ty(d3) Rz(pi)  Rx(pi/2)      Rz(q3)
 *   3->4  Tz(d4) Rx(pi/2)              Rz(q4)
 *   4->5  Ty(d5) Rz(pi)  Rx(pi/2)      Rz(q5)
 *   5->6  Tz(d6) Rx(pi/2)              Rz(q6)
 *   6->7  Ty(d7) Rz(pi)  Rx(pi/2)      Rz(q7)
 *   7->t  Tz(d_t)
 *
 * With this chain the shoulder axes 1-3 meet at frame 2, the elbow axis
 * passes through frame 4 and the wrist axes 5-7 meet at frame 6.
 */

#ifndef SRSIK_KINEMATICS_HPP_
#define SRSIK_KINEMATICS_HPP_

#include "srsik/geometry.hpp"
#include "srsik/types.hpp"

#include <array>

namespace srsik {

/// Number of frames produced by the chain: base, seven joint frames, tool.
inline constexpr int kChainFrames = kDof + 2;

struct ChainFrames {
  std::array<Mat3, kChainFrames> R;
  std::array<Vec3, kChainFrames> p;
};

ChainFrames chain_frames(const RobotGeometry& geom, const JointVector& q);

Pose forward_kinematics(const RobotGeometry& geom, const JointVector& q);

struct ArmPoints {
  Vec3 shoulder;
  Vec3 elbow;
  Vec3 wrist;
};

ArmPoints intermediate_points(const RobotGeometry& geom, const JointVector& q);

/// Geometric Jacobian at the tool point, expressed in the base frame.
Jacobian geometric_jacobian(const RobotGeometry& geom, const JointVector& q);

/// sqrt(det(J J^T)), evaluated from a QR factorization of J^T so the result
/// is nonnegative by construction and vanishes to round-off at singularities.
double manipulability_det(const RobotGeometry& geom, const JointVector& q);

/// Closed-form m(q); depends on q2..q6 only. Throws Error(kGeometryMismatch)
/// if the evaluated m^2 is below -1e-9, values in (-1e-9, 0) clamp to zero.
double manipulability_analytic(const RobotGeometry& geom, const JointVector& q);

/// The closed-form m^2 before clamping.
double manipulability_squared_analytic(const RobotGeometry& geom, const JointVector& q);

Mat3 skew(const Vec3& v);
Mat3 rot_x(double angle);
Mat3 rot_z(double angle);

/// Rotation by `angle` about `axis_unit` (right-hand rule). Throws
/// Error(kInvalidArgument) unless |axis_unit| = 1 within 1e-9.
Mat3 rodrigues(const Vec3& axis_unit, double angle);

/// Constant rotation between joint frames: row i of the table above, i.e.
/// the rotation applied after the translation and before Rz(q_{i+1}).
const Mat3& fixed_rotation(int row);

/// R_0^3 for given shoulder angles.
Mat3 shoulder_rotation(double q1, double q2, double q3);

/// R_4^7 for given wrist angles.
Mat3 wrist_rotation(double q5, double q6, double q7);

}  // namespace srsik

#endif  // SRSIK_KINEMATICS_HPP_
