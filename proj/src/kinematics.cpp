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

#include "srsik/kinematics.hpp"

#include <Eigen/QR>

#include <cmath>

namespace srsik {
namespace {

// Exact integer matrices; Rz(-pi) == Rz(pi).
const Mat3 kRxHalfPi = (Mat3() << 1, 0, 0, 0, 0, -1, 0, 1, 0).finished();
const Mat3 kRzPiRxHalfPi = (Mat3() << -1, 0, 0, 0, 0, 1, 0, 1, 0).finished();

const std::array<Mat3, kDof> kFixedRotations = {
    Mat3::Identity(), kRzPiRxHalfPi, kRzPiRxHalfPi, kRxHalfPi,
    kRzPiRxHalfPi,    kRxHalfPi,     kRzPiRxHalfPi,
};

// Local translation axis of each row (0 = x, 1 = y, 2 = z); the last entry
// is the tool row.
constexpr std::array<int, kDof + 1> kTranslationAxis = {2, 2, 1, 2, 1, 2, 1, 2};

// M * Rz(angle) without forming Rz.
inline void post_rotate_z(Mat3& M, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec3 x = M.col(0);
  const Vec3 y = M.col(1);
  M.col(0) = c * x + s * y;
  M.col(1) = c * y - s * x;
}

}  // namespace

const Mat3& fixed_rotation(int row) { return kFixedRotations.at(static_cast<std::size_t>(row)); }

Mat3 skew(const Vec3& v) {
  Mat3 S;
  S << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return S;
}

Mat3 rot_x(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 R;
  R << 1, 0, 0, 0, c, -s, 0, s, c;
  return R;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

Mat3 rodrigues(const Vec3& axis_unit, double angle) {
  if (!axis_unit.allFinite() || std::abs(axis_unit.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "rodrigues: rotation axis must be a unit vector");
  }
  const Mat3 K = skew(axis_unit);
  return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * (K * K);
}

ChainFrames chain_frames(const RobotGeometry& geom, const JointVector& q) {
  ChainFrames f;
  f.R[0].setIdentity();
  f.p[0].setZero();
  for (int i = 0; i < kDof; ++i) {
    f.p[i + 1] = f.p[i] + geom.d[i] * f.R[i].col(kTranslationAxis[i]);
    f.R[i + 1] = f.R[i] * kFixedRotations[i];
    post_rotate_z(f.R[i + 1], q[i]);
  }
  f.p[kDof + 1] = f.p[kDof] + geom.d_t * f.R[kDof].col(kTranslationAxis[kDof]);
  f.R[kDof + 1] = f.R[kDof];
  return f;
}

Pose forward_kinematics(const RobotGeometry& geom, const JointVector& q) {
  const ChainFrames f = chain_frames(geom, q);
  return Pose{f.R[kDof + 1], f.p[kDof + 1]};
}

ArmPoints intermediate_points(const RobotGeometry& geom, const JointVector& q) {
  const ChainFrames f = chain_frames(geom, q);
  return ArmPoints{f.p[2], f.p[4], f.p[6]};
}

Jacobian geometric_jacobian(const RobotGeometry& geom, const JointVector& q) {
  const ChainFrames f = chain_frames(geom, q);
  const Vec3& tip = f.p[kDof + 1];
  Jacobian J;
  for (int i = 0; i < kDof; ++i) {
    const Vec3 z = f.R[i + 1].col(2);
    J.block<3, 1>(0, i) = z.cross(tip - f.p[i + 1]);
    J.block<3, 1>(3, i) = z;
  }
  return J;
}

double manipulability_det(const RobotGeometry& geom, const JointVector& q) {
  // J^T = QR gives J J^T = R^T R, so sqrt(det) = |prod R_ii| without squaring
  // the round-off of a rank-deficient J.
  const Jacobian J = geometric_jacobian(geom, q);
  const Eigen::HouseholderQR<Eigen::Matrix<double, kDof, 6>> qr(J.transpose());
  return std::abs(qr.matrixQR().diagonal().prod());
}

double manipulability_squared_analytic(const RobotGeometry& geom, const JointVector& q) {
  const double a = geom.d_se();
  const double b = geom.d_ew();
  const double s2 = std::sin(q[1]), c2 = std::cos(q[1]);
  const double c3 = std::cos(q[2]);
  const double s4 = std::sin(q[3]), c4 = std::cos(q[3]);
  const double c5 = std::cos(q[4]);
  const double s6 = std::sin(q[5]), c6 = std::cos(q[5]);
  const double s2s2 = s2 * s2, s4s4 = s4 * s4, s6s6 = s6 * s6;
  const double a2 = a * a, b2 = b * b, ab = a * b;

  // a^2 + 2ab cos(q4) + b^2 is |p_sw|^2.
  const double bracket = a2 * s2s2 * s4s4 * c5 * c5 * c6 * c6 +
                         b2 * c2 * c2 * c3 * c3 * s4s4 * s6s6 +
                         (a2 + 2.0 * ab * c4 + b2) * s2s2 * s6s6 -
                         0.5 * (a2 * c4 + ab) * s2s2 * s4 * c5 * (2.0 * s6 * c6) -
                         0.5 * (b2 * c4 + ab) * (2.0 * s2 * c2) * c3 * s4 * s6s6;
  return 2.0 * a2 * b2 * s4s4 * bracket;
}

double manipulability_analytic(const RobotGeometry& geom, const JointVector& q) {
  const double m2 = manipulability_squared_analytic(geom, q);
  if (m2 < -1e-9) {
    throw Error(ErrorCode::kGeometryMismatch,
                "closed-form manipulability is negative; geometry does not match the chain");
  }
  return m2 > 0.0 ? std::sqrt(m2) : 0.0;
}

Mat3 shoulder_rotation(double q1, double q2, double q3) {
  Mat3 R = rot_z(q1) * kFixedRotations[1];
  post_rotate_z(R, q2);
  R = R * kFixedRotations[2];
  post_rotate_z(R, q3);
  return R;
}

Mat3 wrist_rotation(double q5, double q6, double q7) {
  Mat3 R = kFixedRotations[4];
  post_rotate_z(R, q5);
  R = R * kFixedRotations[5];
  post_rotate_z(R, q6);
  R = R * kFixedRotations[6];
  post_rotate_z(R, q7);
  return R;
}

}  // namespace srsik
