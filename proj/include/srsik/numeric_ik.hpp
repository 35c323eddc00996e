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

#ifndef SRSIK_NUMERIC_IK_HPP_
#define SRSIK_NUMERIC_IK_HPP_

#include "srsik/geometry.hpp"
#include "srsik/types.hpp"

namespace srsik {

struct DlsSettings {
  double damping = 0.1;
  double tol = 1e-8;
  int max_iters = 50;

  void validate() const;
};

struct DlsResult {
  JointVector q = JointVector::Zero();
  int iterations = 0;
  bool converged = false;
  double error_norm = 0.0;
  /// Share of iterations that did not increase |e|.
  double monotone_fraction = 1.0;
};

/// 6-vector [p_target - p; axis-angle of R_target R^T].
Twist pose_error(const Pose& current, const Pose& target);

/// Damped least squares: q <- q + J^T (J J^T + damping^2 I)^-1 e until
/// |e| < tol or max_iters updates have been taken.
DlsResult dls_solve(const RobotGeometry& geom, const Pose& target, const JointVector& q_init,
                    const DlsSettings& settings = {});

}  // namespace srsik

#endif  // SRSIK_NUMERIC_IK_HPP_
