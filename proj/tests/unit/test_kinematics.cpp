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

#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <algorithm>

using namespace srsik;

namespace {

const RobotGeometry kGeom = RobotGeometry::iiwa14();

// The closed form exactly as printed, parameterized by the link lengths.
double printed_m2(double a, double b, const JointVector& q) {
  const double s2 = std::sin(q[1]), c2 = std::cos(q[1]), c3 = std::cos(q[2]);
  const double s4 = std::sin(q[3]), c4 = std::cos(q[3]), c5 = std::cos(q[4]);
  const double s6 = std::sin(q[5]), c6 = std::cos(q[5]);
  const double br = a * a * s2 * s2 * s4 * s4 * c5 * c5 * c6 * c6 +
                    b * b * c2 * c2 * c3 * c3 * s4 * s4 * s6 * s6 +
                    (a * a + 2 * a * b * c4 - b * b) * s2 * s2 * s6 * s6 +
                    0.5 * (a * a * c4 + a * b) * s2 * s2 * s4 * c5 * std::sin(2 * q[5]) +
                    0.5 * (b * b * c4 + a * b) * std::sin(2 * q[1]) * c3 * s4 * s6 * s6;
  return 2 * a * a * b * b * s4 * s4 * br;
}

}  // namespace

TEST_CASE("zero configuration is the straight chain along the base axis") {
  // Hand expansion of the constant rotations: rows 2 and 3 cancel, and so do
  // rows 4-5 and 6-7 pairwise, so the tool frame equals the base frame.
  const Pose p = forward_kinematics(kGeom, JointVector::Zero());
  double length = kGeom.d_t;
  for (double d : kGeom.d) length += d;
  CHECK((p.R - Mat3::Identity()).norm() < 1e-15);
  CHECK(p.p.head<2>().norm() < 1e-15);
  CHECK(p.p.z() == doctest::Approx(length).epsilon(1e-15));
  CHECK(length == doctest::Approx(1.331));
}

TEST_CASE("base joint rotates the tool position about world z") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    JointVector q = test::random_q(kGeom, rng);
    const Vec3 p0 = forward_kinematics(kGeom, q).p;
    const double delta = 0.3;
    q[0] += delta;
    const Vec3 p1 = forward_kinematics(kGeom, q).p;
    CHECK((rot_z(delta) * p0 - p1).norm() < 1e-12);
    CHECK(std::abs(p0.norm() - p1.norm()) < 1e-12);
  }
}

TEST_CASE("forward kinematics agrees with the homogeneous-matrix chain") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const JointVector q = test::random_q(kGeom, rng, 1.2);
    const Pose a = forward_kinematics(kGeom, q);
    const Pose b = test::oracle::fk(kGeom, q);
    REQUIRE((a.R - b.R).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((a.p - b.p).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(a.is_valid());
  }
}

TEST_CASE("intermediate points keep the link lengths") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const JointVector q = test::random_q(kGeom, rng);
    const ArmPoints pts = intermediate_points(kGeom, q);
    REQUIRE((pts.shoulder - Vec3(0, 0, kGeom.shoulder_height())).norm() < 1e-15);
    REQUIRE(std::abs((pts.shoulder - pts.elbow).norm() - kGeom.d_se()) < 1e-12);
    REQUIRE(std::abs((pts.elbow - pts.wrist).norm() - kGeom.d_ew()) < 1e-12);
    const Pose tool = forward_kinematics(kGeom, q);
    const Vec3 pw = tool.p - tool.R * Vec3(0, 0, kGeom.wrist_to_tip());
    REQUIRE((pw - pts.wrist).norm() < 1e-12);
    // The oracle's frames 2, 4 and 6 coincide with the same points.
    const auto T = test::oracle::chain(kGeom, q);
    REQUIRE((T[4].topRightCorner<3, 1>() - pts.elbow).norm() < 1e-12);
  }
  const ArmPoints z = intermediate_points(kGeom, JointVector::Zero());
  CHECK(z.elbow.head<2>().norm() < 1e-15);
  CHECK(z.wrist.head<2>().norm() < 1e-15);
}

TEST_CASE("jacobian matches central differences of the tool pose") {
  std::mt19937_64 rng(4);
  const double h = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const JointVector q = test::random_q(kGeom, rng);
    const Jacobian J = geometric_jacobian(kGeom, q);
    const Mat3 R0 = forward_kinematics(kGeom, q).R;
    for (int i = 0; i < kDof; ++i) {
      JointVector qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const Pose fp = forward_kinematics(kGeom, qp);
      const Pose fm = forward_kinematics(kGeom, qm);
      const Vec3 dp = (fp.p - fm.p) / (2 * h);
      // [w]x = Rdot R^T
      const Mat3 W = (fp.R - fm.R) / (2 * h) * R0.transpose();
      const Vec3 w(W(2, 1), W(0, 2), W(1, 0));
      worst = std::max(worst, (J.block<3, 1>(0, i) - dp).cwiseAbs().maxCoeff());
      worst = std::max(worst, (J.block<3, 1>(3, i) - w).cwiseAbs().maxCoeff());
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("straight arm is rank deficient") {
  const Jacobian J = geometric_jacobian(kGeom, JointVector::Zero());
  Eigen::JacobiSVD<Jacobian> svd(J);
  CHECK(svd.singularValues()[5] < 1e-12);
  CHECK(manipulability_det(kGeom, JointVector::Zero()) < 1e-9);
}

TEST_CASE("manipulability vanishes with the elbow straight") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    JointVector q = test::random_q(kGeom, rng);
    q[3] = 0.0;
    CHECK(manipulability_det(kGeom, q) < 1e-9);
    CHECK(manipulability_squared_analytic(kGeom, q) == 0.0);
    CHECK(manipulability_analytic(kGeom, q) == 0.0);
  }
}

TEST_CASE("closed-form manipulability equals the Gram determinant") {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const JointVector q = test::random_q(kGeom, rng);
    const double md = manipulability_det(kGeom, q);
    const double ma = manipulability_analytic(kGeom, q);
    REQUIRE(md >= 0.0);
    REQUIRE(ma >= 0.0);
    worst = std::max(worst, std::abs(ma - md) / std::max(md, 1e-12));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("the printed closed form does not match under either index convention") {
  const auto& d = kGeom.d;
  const double conventions[2][2] = {{d[2] + d[3], d[4] + d[5]}, {d[1] + d[2], d[3] + d[4]}};
  for (const auto& c : conventions) {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const JointVector q = test::random_q(kGeom, rng);
      const double md = manipulability_det(kGeom, q);
      const double m2 = printed_m2(c[0], c[1], q);
      const double mp = std::sqrt(std::max(m2, 0.0));
      worst = std::max(worst, std::abs(mp - md) / std::max(md, 1e-12));
    }
    CHECK(worst > 1e-3);
  }
}

TEST_CASE("closed form ignores the first and last joints") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    JointVector q = test::random_q(kGeom, rng);
    const double m = manipulability_analytic(kGeom, q);
    q[0] = -q[0] + 0.7;
    q[6] = 1.3;
    CHECK(manipulability_analytic(kGeom, q) == m);
  }
}

TEST_CASE("rodrigues rotation") {
  CHECK((rodrigues(Vec3(0, 1, 0), 0.0) - Mat3::Identity()).norm() == 0.0);
  CHECK((rodrigues(Vec3::UnitZ(), kPi / 2) * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-15);
  CHECK_THROWS_AS(rodrigues(Vec3(1, 1, 0), 0.1), Error);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(-4, 4);
  for (int t = 0; t < 200; ++t) {
    const Vec3 a = Vec3(n(rng), n(rng), n(rng)).normalized();
    const double al = u(rng), be = u(rng);
    const Mat3 R = rodrigues(a, al);
    CHECK((R * R.transpose() - Mat3::Identity()).norm() < 1e-12);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((R * rodrigues(a, be) - rodrigues(a, al + be)).norm() < 1e-12);
  }
}

TEST_CASE("geometry config parsing") {
  const std::string good = geometry_to_json(kGeom);
  const RobotGeometry g = parse_geometry(good);
  for (int i = 0; i < kDof; ++i) {
    CHECK(g.d[i] == kGeom.d[i]);
    CHECK(g.q_max[i] == doctest::Approx(kGeom.q_max[i]).epsilon(1e-15));
  }
  CHECK(kGeom.d_se() == doctest::Approx(0.42));
  CHECK(kGeom.d_ew() == doctest::Approx(0.40));
  const std::string short_d =
      R"({"d":[0.1,0.2,0.2,0.2,0.2,0.2],"d_t":0.07,"q_max_deg":[1,1,1,1,1,1,1],)"
      R"("qd_max_deg_s":[1,1,1,1,1,1,1],"tau_max_Nm":[1,1,1,1,1,1,1]})";
  CHECK_THROWS_AS(parse_geometry(short_d), Error);
  const std::string negative =
      R"({"d":[0.1,0.2,0.2,0.2,0.2,0.2,-0.1],"d_t":0.07,"q_max_deg":[1,1,1,1,1,1,1],)"
      R"("qd_max_deg_s":[1,1,1,1,1,1,1],"tau_max_Nm":[1,1,1,1,1,1,1]})";
  CHECK_THROWS_AS(parse_geometry(negative), Error);
  CHECK_THROWS_AS(parse_geometry("{not json"), Error);
}
