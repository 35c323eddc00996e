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
 * @file analytic_ik.hpp
 * @brief Closed-form IK of the S-R-S arm parameterized by branch flags and
 *        the arm angle.
 *
 * The arm angle phi rotates the shoulder-elbow-wrist plane about the unit
 * shoulder-to-wrist vector (right-hand rule), starting from the reference
 * arm with q3 = 0. The flags select sign(q2), sign(q4) and sign(q6).
 */

#ifndef SRSIK_ANALYTIC_IK_HPP_
#define SRSIK_ANALYTIC_IK_HPP_

#include "srsik/geometry.hpp"
#include "srsik/types.hpp"

#include <array>

namespace srsik {

/// Guard on |sin q2|, |sin q4|, |sin q6| below which a branch is degenerate.
inline constexpr double kSingularityEps = 1e-6;
/// arccos arguments within this window outside [-1, 1] are clamped.
inline constexpr double kAcosClampWindow = 1e-9;

/// Wraps into [0, 2 pi).
double wrap_two_pi(double angle);

struct RedundancyParams {
  int js = 1;
  int je = 1;
  int jw = 1;
  double phi = 0.0;

  /// Validates flags are +-1 and wraps phi into [0, 2 pi).
  static RedundancyParams make(int js, int je, int jw, double phi);
};

/// One of the 8 flag combinations, index = 4 (js+1)/2 + 2 (je+1)/2 + (jw+1)/2.
struct BranchClass {
  int index = 0;

  static BranchClass from_flags(int js, int je, int jw);
  [[nodiscard]] int js() const { return (index & 4) ? 1 : -1; }
  [[nodiscard]] int je() const { return (index & 2) ? 1 : -1; }
  [[nodiscard]] int jw() const { return (index & 1) ? 1 : -1; }
  [[nodiscard]] RedundancyParams with_phi(double phi) const;
};

inline constexpr int kBranchCount = 8;

BranchClass branch_of(const RedundancyParams& p);

enum Degeneracy : unsigned {
  kDegenerateNone = 0,
  kShoulderAxis = 1U << 0,    // wrist on the base z-axis, reference plane arbitrary
  kShoulderBranch = 1U << 1,  // |sin q2| < eps, q3 := 0
  kWristBranch = 1U << 2,     // |sin q6| < eps, q5 := 0
};

struct IkSolution {
  JointVector q = JointVector::Zero();
  unsigned degeneracy = kDegenerateNone;

  [[nodiscard]] bool degenerate() const { return degeneracy != kDegenerateNone; }
};

/// p_w = p - R (0, 0, d7 + d_t).
Vec3 wrist_point(const RobotGeometry& geom, const Pose& target);

/// Shoulder-to-wrist vector p_w - p_s.
Vec3 shoulder_to_wrist(const RobotGeometry& geom, const Pose& target);

/// q4 = je * acos((|p_sw|^2 - d_se^2 - d_ew^2) / (2 d_se d_ew)).
/// Throws Error(kUnreachable) outside the reachable annulus.
double elbow_angle(const RobotGeometry& geom, const Vec3& p_sw, int je);

struct ReferenceArm {
  double q1 = 0.0;
  double q2 = 0.0;
  bool shoulder_singular = false;
};

/// Shoulder angles of the q3 = 0 arm placing the wrist at p_s + p_sw. When
/// the wrist lies on the base axis, q1 := 0 and the result is flagged.
ReferenceArm reference_arm(const RobotGeometry& geom, const Vec3& p_sw, int je);

/// Per-target precomputation shared by every (flags, phi) query. Construction
/// throws Error(kUnreachable) if the wrist is outside the annulus.
class IkTarget {
 public:
  IkTarget(const RobotGeometry& geom, const Pose& target);

  [[nodiscard]] IkSolution solve(const RedundancyParams& params) const;
  [[nodiscard]] IkSolution solve(BranchClass branch, double sin_phi, double cos_phi) const;

  [[nodiscard]] const Vec3& p_sw() const { return p_sw_; }
  [[nodiscard]] bool shoulder_singular() const { return shoulder_singular_; }

 private:
  struct ElbowBranch {
    double q4 = 0.0;
    // R_0^3 = A0 + sin(phi) A1 + (1 - cos(phi)) A2, and R_4^7 likewise.
    Mat3 shoulder0, shoulder1, shoulder2;
    Mat3 wrist0, wrist1, wrist2;
  };

  std::array<ElbowBranch, 2> elbow_;  // [0]: je = -1, [1]: je = +1
  Vec3 p_sw_;
  bool shoulder_singular_ = false;
};

IkSolution analytic_ik(const RobotGeometry& geom, const Pose& target,
                       const RedundancyParams& params);

struct ExtractedParams {
  RedundancyParams params;
  bool plane_degenerate = false;  // |sin q4| < eps, phi := 0
};

/// Inverse of the parameterization: flags from the signs of q2, q4, q6
/// (sign(0) := +1) and phi as the signed angle about p_sw from the reference
/// arm plane to the plane through shoulder, elbow and wrist.
ExtractedParams extract_params(const RobotGeometry& geom, const JointVector& q);

}  // namespace srsik

#endif  // SRSIK_ANALYTIC_IK_HPP_
