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

#include "srsik/numeric_ik.hpp"

#include "srsik/kinematics.hpp"

#include <cmath>

namespace srsik {

void DlsSettings::validate() const {
  if (!(damping > 0.0) || !(tol > 0.0) || max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dls: damping and tol must be positive, max_iters >= 1");
  }
}

Twist pose_error(const Pose& current, const Pose& target) {
  Twist e;
  e.head<3>() = target.p - current.p;
  const Eigen::AngleAxisd aa(Mat3(target.R * current.R.transpose()));
  e.tail<3>() = aa.angle() * aa.axis();
  return e;
}

DlsResult dls_solve(const RobotGeometry& geom, const Pose& target, const JointVector& q_init,
                    const DlsSettings& settings) {
  settings.validate();
  DlsResult r;
  r.q = q_init;
  const double damp2 = settings.damping * settings.damping;
  Twist e = pose_error(forward_kinematics(geom, r.q), target);
  r.error_norm = e.norm();
  int non_increasing = 0;
  while (r.error_norm >= settings.tol && r.iterations < settings.max_iters) {
    const Jacobian J = geometric_jacobian(geom, r.q);
    Eigen::Matrix<double, 6, 6> A = J * J.transpose();
    A.diagonal().array() += damp2;
    r.q += J.transpose() * A.llt().solve(e);
    ++r.iterations;
    e = pose_error(forward_kinematics(geom, r.q), target);
    const double norm = e.norm();
    if (norm <= r.error_norm) ++non_increasing;
    r.error_norm = norm;
  }
  r.converged = r.error_norm < settings.tol;
  if (r.iterations > 0) r.monotone_fraction = static_cast<double>(non_increasing) / r.iterations;
  return r;
}

}  // namespace srsik
