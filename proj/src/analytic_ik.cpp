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

#include "srsik/analytic_ik.hpp"

#include "srsik/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace srsik {
namespace {

constexpr double kAxisEps = 1e-9;  // m, wrist distance from the base z-axis

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

inline int sign_flag(double x) { return x >= 0.0 ? 1 : -1; }

void check_flag(int f, const char* name) {
  if (f != 1 && f != -1) {
    throw Error(ErrorCode::kInvalidArgument, std::string("branch flag ") + name + " must be +1 or -1");
  }
}

}  // namespace

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

RedundancyParams RedundancyParams::make(int js, int je, int jw, double phi) {
  check_flag(js, "js");
  check_flag(je, "je");
  check_flag(jw, "jw");
  if (!std::isfinite(phi)) throw Error(ErrorCode::kInvalidArgument, "arm angle must be finite");
  return RedundancyParams{js, je, jw, wrap_two_pi(phi)};
}

BranchClass BranchClass::from_flags(int js, int je, int jw) {
  check_flag(js, "js");
  check_flag(je, "je");
  check_flag(jw, "jw");
  return BranchClass{4 * (js + 1) / 2 + 2 * (je + 1) / 2 + (jw + 1) / 2};
}

RedundancyParams BranchClass::with_phi(double phi) const {
  return RedundancyParams::make(js(), je(), jw(), phi);
}

BranchClass branch_of(const RedundancyParams& p) { return BranchClass::from_flags(p.js, p.je, p.jw); }

Vec3 wrist_point(const RobotGeometry& geom, const Pose& target) {
  return target.p - geom.wrist_to_tip() * target.R.col(2);
}

Vec3 shoulder_to_wrist(const RobotGeometry& geom, const Pose& target) {
  return wrist_point(geom, target) - Vec3(0.0, 0.0, geom.shoulder_height());
}

double elbow_angle(const RobotGeometry& geom, const Vec3& p_sw, int je) {
  check_flag(je, "je");
  const double a = geom.d_se();
  const double b = geom.d_ew();
  const double arg = (p_sw.squaredNorm() - a * a - b * b) / (2.0 * a * b);
  if (!std::isfinite(arg) || arg > 1.0 + kAcosClampWindow || arg < -1.0 - kAcosClampWindow) {
    throw Error(ErrorCode::kUnreachable, "target wrist point is outside the reachable annulus");
  }
  return je * std::acos(clamp_unit(arg));
}

ReferenceArm reference_arm(const RobotGeometry& geom, const Vec3& p_sw, int je) {
  check_flag(je, "je");
  const double a = geom.d_se();
  const double b = geom.d_ew();
  const double len = p_sw.norm();
  const double rho = std::hypot(p_sw.x(), p_sw.y());
  ReferenceArm ref;
  ref.shoulder_singular = rho < kAxisEps;
  ref.q1 = ref.shoulder_singular ? 0.0 : std::atan2(p_sw.y(), p_sw.x());
  const double gamma = je * std::acos(clamp_unit((a * a + len * len - b * b) / (2.0 * a * len)));
  ref.q2 = std::atan2(rho, p_sw.z()) + gamma;
  return ref;
}

IkTarget::IkTarget(const RobotGeometry& geom, const Pose& target) {
  p_sw_ = shoulder_to_wrist(geom, target);
  const double len = p_sw_.norm();
  if (!(len > kAxisEps)) {
    throw Error(ErrorCode::kUnreachable, "target wrist point coincides with the shoulder");
  }
  const Vec3 k = p_sw_ / len;
  const Mat3 K = skew(k);
  const Mat3 K2 = K * K;
  for (int je : {-1, 1}) {
    ElbowBranch& eb = elbow_[je > 0 ? 1 : 0];
    eb.q4 = elbow_angle(geom, p_sw_, je);
    const ReferenceArm ref = reference_arm(geom, p_sw_, je);
    shoulder_singular_ = ref.shoulder_singular;
    const Mat3 R03n = shoulder_rotation(ref.q1, ref.q2, 0.0);
    const Mat3 R34 = fixed_rotation(3) * rot_z(eb.q4);
    eb.shoulder0 = R03n;
    eb.shoulder1 = K * R03n;
    eb.shoulder2 = K2 * R03n;
    eb.wrist0 = (eb.shoulder0 * R34).transpose() * target.R;
    eb.wrist1 = (eb.shoulder1 * R34).transpose() * target.R;
    eb.wrist2 = (eb.shoulder2 * R34).transpose() * target.R;
  }
}

IkSolution IkTarget::solve(const RedundancyParams& params) const {
  return solve(branch_of(params), std::sin(params.phi), std::cos(params.phi));
}

IkSolution IkTarget::solve(BranchClass branch, double sin_phi, double cos_phi) const {
  const ElbowBranch& eb = elbow_[branch.je() > 0 ? 1 : 0];
  const double vers = 1.0 - cos_phi;
  const Mat3 R03 = eb.shoulder0 + sin_phi * eb.shoulder1 + vers * eb.shoulder2;
  const Mat3 R47 = eb.wrist0 + sin_phi * eb.wrist1 + vers * eb.wrist2;
  const double js = branch.js();
  const double jw = branch.jw();

  IkSolution sol;
  if (shoulder_singular_) sol.degeneracy |= kShoulderAxis;
  JointVector& q = sol.q;
  q[3] = eb.q4;

  q[1] = js * std::acos(clamp_unit(R03(2, 2)));
  if (std::abs(std::sin(q[1])) < kSingularityEps) {
    // Only q1 +- q3 is determined; fix q3 and solve Rz(q1) = R03 (F1 Rz(q2) F2)^T.
    sol.degeneracy |= kShoulderBranch;
    q[2] = 0.0;
    const Mat3 X = R03 * shoulder_rotation(0.0, q[1], 0.0).transpose();
    q[0] = std::atan2(X(1, 0), X(0, 0));
  } else {
    q[0] = std::atan2(js * R03(1, 2), js * R03(0, 2));
    q[2] = std::atan2(js * R03(2, 1), -js * R03(2, 0));
  }

  q[5] = jw * std::acos(clamp_unit(R47(1, 2)));
  if (std::abs(std::sin(q[5])) < kSingularityEps) {
    sol.degeneracy |= kWristBranch;
    q[4] = 0.0;
    const Mat3 Y = wrist_rotation(0.0, q[5], 0.0).transpose() * R47;
    q[6] = std::atan2(Y(1, 0), Y(0, 0));
  } else {
    q[4] = std::atan2(-jw * R47(2, 2), jw * R47(0, 2));
    q[6] = std::atan2(jw * R47(1, 1), -jw * R47(1, 0));
  }
  return sol;
}

IkSolution analytic_ik(const RobotGeometry& geom, const Pose& target,
                       const RedundancyParams& params) {
  return IkTarget(geom, target).solve(params);
}

ExtractedParams extract_params(const RobotGeometry& geom, const JointVector& q) {
  const ChainFrames f = chain_frames(geom, q);
  const Vec3 p_sw = f.p[6] - f.p[2];

  ExtractedParams out;
  out.params.js = sign_flag(q[1]);
  out.params.je = sign_flag(q[3]);
  out.params.jw = sign_flag(q[5]);
  if (std::abs(std::sin(q[3])) < kSingularityEps) {
    out.plane_degenerate = true;
    out.params.phi = 0.0;
    return out;
  }

  const Vec3 k = p_sw.normalized();
  const ReferenceArm ref = reference_arm(geom, p_sw, out.params.je);
  const Vec3 u = shoulder_rotation(ref.q1, ref.q2, 0.0).col(2);  // reference elbow direction
  const Vec3 v = f.R[3].col(2);                                   // actual elbow direction
  const Vec3 u_perp = u - u.dot(k) * k;
  const Vec3 v_perp = v - v.dot(k) * k;
  out.params.phi = wrap_two_pi(std::atan2(k.dot(u_perp.cross(v_perp)), u_perp.dot(v_perp)));
  return out;
}

}  // namespace srsik
