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
#include "test_support.hpp"

#include <doctest.h>

using namespace srsik;

namespace {
const RobotGeometry kGeom = RobotGeometry::iiwa14();
}

TEST_CASE("pose error is zero at the target and matches a small rotation") {
  const Pose p = forward_kinematics(kGeom, (JointVector() << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7).finished());
  CHECK(pose_error(p, p).norm() < 1e-15);
  Pose q = p;
  q.R = rot_z(1e-3) * p.R;
  q.p += Vec3(0.01, 0.0, -0.02);
  const Twist e = pose_error(p, q);
  CHECK(e.head<3>().isApprox(Vec3(0.01, 0.0, -0.02)));
  CHECK((e.tail<3>() - Vec3(0, 0, 1e-3)).norm() < 1e-12);
}

TEST_CASE("exact initial guess is a fixed point") {
  const JointVector q = (JointVector() << 0.3, -0.4, 0.5, 1.1, -0.2, 0.6, 0.1).finished();
  const DlsResult r = dls_solve(kGeom, forward_kinematics(kGeom, q), q);
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  CHECK(r.error_norm < 1e-8);
}

TEST_CASE("converged runs reach the target and some random pairs fail") {
  std::mt19937_64 rng(21);
  int failed = 0;
  const int n = 300;
  for (int k = 0; k < n; ++k) {
    const JointVector q0 = test::random_q(kGeom, rng);
    const Pose target = forward_kinematics(kGeom, test::random_q(kGeom, rng));
    const DlsResult r = dls_solve(kGeom, target, q0);
    if (!r.converged) {
      ++failed;
      CHECK(r.iterations == 50);
      continue;
    }
    const Twist e = pose_error(forward_kinematics(kGeom, r.q), target);
    CHECK(e.norm() < 1e-8);
    const DlsResult again = dls_solve(kGeom, target, q0);
    CHECK(again.q == r.q);
    CHECK(again.iterations == r.iterations);
  }
  MESSAGE("DLS failures: " << failed << " of " << n);
  CHECK(failed > 0);
  CHECK(failed < n);
}

TEST_CASE("invalid settings are rejected") {
  DlsSettings s;
  s.max_iters = 0;
  CHECK_THROWS_AS(dls_solve(kGeom, Pose{}, JointVector::Zero(), s), Error);
  s = DlsSettings{};
  s.damping = 0;
  CHECK_THROWS_AS(dls_solve(kGeom, Pose{}, JointVector::Zero(), s), Error);
}
