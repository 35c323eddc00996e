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

#include "srsik/trajopt.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <sstream>

using namespace srsik;

namespace {

const RobotGeometry kGeom = RobotGeometry::iiwa14();
constexpr double kTol = 1e-6;

// Rest-to-rest minimum time: accelerate at a, cruise at the peak speed
// (capped at v), decelerate at a.
double oracle_min_time(double distance, double v, double a) {
  const double peak = std::min(v, std::sqrt(std::abs(distance) * a));
  if (peak == 0.0) return 0.0;
  return std::abs(distance) / peak + peak / a;
}

Trajectory scaled(const Trajectory& t, double factor) {
  Trajectory s = t;
  s.t_F = factor * t.t_F;
  s.qd = t.qd / factor;
  s.u = t.u / (factor * factor);
  return s;
}

}  // namespace

TEST_CASE("single-joint moves stay within 15% above the minimum-time bound") {
  const TrajConfig cfg;
  for (int joint = 0; joint < kDof; ++joint) {
    for (double distance : {0.05, 0.3, 1.0, 2.5, 0.9 * 2.0 * kGeom.q_max[joint]}) {
      JointVector q0 = JointVector::Zero();
      JointVector qf = JointVector::Zero();
      q0[joint] = -0.5 * distance;
      qf[joint] = 0.5 * distance;
      const TrajProblem p = TrajProblem::make(kGeom, q0, qf, cfg);
      const Trajectory t = assemble_and_solve(p, kTol, cfg.max_iters);
      const double bound = oracle_min_time(distance, kGeom.qd_max[joint], cfg.u_max[joint]);
      CAPTURE(joint);
      CAPTURE(distance);
      REQUIRE(t.report.converged);
      CHECK(t.t_F >= bound - kTol);
      CHECK(t.t_F <= 1.15 * bound);
      CHECK(validate_trajectory(p, t).ok(kTol));
    }
  }
}

TEST_CASE("goal equal to start yields the shortest duration at rest") {
  const JointVector q = (JointVector() << 0.2, -0.3, 0.4, 1.0, -0.5, 0.6, 0.7).finished();
  const TrajConfig cfg;
  const TrajProblem p = TrajProblem::make(kGeom, q, q, cfg);
  const Trajectory t = assemble_and_solve(p);
  CHECK(t.report.converged);
  CHECK(t.t_F == doctest::Approx(cfg.t_min));
  CHECK(t.u.cwiseAbs().maxCoeff() <= kTol);
  CHECK(validate_trajectory(p, t).max_defect <= kTol);
  CHECK(t.cost == doctest::Approx(cfg.t_min));
}

TEST_CASE("random pairs converge and pass the independent validator") {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 20; ++n) {
    const JointVector q0 = test::random_q(kGeom, rng);
    const JointVector qf = test::random_q(kGeom, rng);
    const TrajProblem p = TrajProblem::make(kGeom, q0, qf);
    const Trajectory t = assemble_and_solve(p);
    REQUIRE(t.report.converged);
    CHECK(t.report.stationarity <= 10 * kTol);
    CHECK(t.q.rows() == p.intervals + 1);
    const TrajValidation v = validate_trajectory(p, t);
    CHECK(v.ok(kTol));
    CHECK(std::abs(v.max_defect - t.report.max_defect) < 1e-12);
    CHECK(v.cost == doctest::Approx(t.cost).epsilon(1e-12));
    for (int i = 0; i < kDof; ++i) {
      CHECK(t.q.col(i).cwiseAbs().maxCoeff() <= kGeom.q_max[i] + kTol);
      CHECK(t.qd.col(i).cwiseAbs().maxCoeff() <= kGeom.qd_max[i] + kTol);
      CHECK(t.u.col(i).cwiseAbs().maxCoeff() <= p.u_max[i] + kTol);
    }
    double slowest = 0.0;
    for (int i = 0; i < kDof; ++i) {
      slowest = std::max(slowest, oracle_min_time(qf[i] - q0[i], kGeom.qd_max[i], p.u_max[i]));
    }
    CHECK(t.t_F >= slowest - kTol);
  }
}

TEST_CASE("a corrupted velocity is reported at the corrupted interval") {
  const JointVector q0 = (JointVector() << 0.5, -0.3, 0.2, 1.0, 0.0, -0.4, 0.3).finished();
  const JointVector qf = (JointVector() << -0.4, 0.6, 0.0, -0.2, 1.1, 0.5, -1.0).finished();
  const TrajProblem p = TrajProblem::make(kGeom, q0, qf);
  Trajectory t = assemble_and_solve(p);
  REQUIRE(validate_trajectory(p, t).ok(kTol));
  const int node = 17;
  t.qd(node, 2) += 0.05;
  const TrajValidation v = validate_trajectory(p, t);
  CHECK_FALSE(v.ok(kTol));
  CHECK(v.defect_joint == 2);
  CHECK((v.defect_interval == node - 1 || v.defect_interval == node));
  CHECK(v.max_defect == doctest::Approx(0.05));

  Trajectory moved = assemble_and_solve(p);
  moved.q(0, 4) += 1e-3;
  CHECK(validate_trajectory(p, moved).max_boundary_error == doctest::Approx(1e-3));
}

TEST_CASE("stretching time keeps the trajectory feasible") {
  const JointVector q0 = (JointVector() << 0.1, 0.4, -0.6, 0.9, 0.3, -0.2, 1.2).finished();
  const JointVector qf = (JointVector() << -0.8, -0.1, 0.4, 1.5, -0.6, 0.7, -0.5).finished();
  const TrajProblem p = TrajProblem::make(kGeom, q0, qf);
  const Trajectory t = assemble_and_solve(p);
  REQUIRE(t.report.converged);
  const TrajValidation v = validate_trajectory(p, scaled(t, 2.0));
  CHECK(v.ok(kTol));
  CHECK(v.max_defect <= kTol);
}

TEST_CASE("refining the grid changes the cost by less than 5%") {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 5; ++n) {
    const JointVector q0 = test::random_q(kGeom, rng);
    const JointVector qf = test::random_q(kGeom, rng);
    TrajConfig coarse;
    TrajConfig fine;
    fine.intervals = 2 * coarse.intervals;
    const Trajectory a = assemble_and_solve(TrajProblem::make(kGeom, q0, qf, coarse));
    const Trajectory b = assemble_and_solve(TrajProblem::make(kGeom, q0, qf, fine));
    REQUIRE(a.report.converged);
    REQUIRE(b.report.converged);
    MESSAGE("N = 50 cost " << a.cost << ", N = 100 cost " << b.cost);
    CHECK(b.cost <= 1.05 * a.cost);
  }
}

TEST_CASE("solver is deterministic") {
  const JointVector q0 = (JointVector() << 0.3, 0.2, -0.1, 0.5, 0.8, -0.7, 0.0).finished();
  const JointVector qf = (JointVector() << -1.0, 0.9, 0.6, -0.4, 0.1, 0.2, 2.0).finished();
  const TrajProblem p = TrajProblem::make(kGeom, q0, qf);
  const Trajectory a = assemble_and_solve(p);
  const Trajectory b = assemble_and_solve(p);
  CHECK(a.t_F == b.t_F);
  CHECK(a.cost == b.cost);
  CHECK(a.u == b.u);
}

TEST_CASE("invalid problems are rejected") {
  TrajConfig cfg;
  cfg.intervals = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrajConfig{};
  cfg.r_weight[3] = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrajConfig{};
  cfg.t_max = cfg.t_min;
  CHECK_THROWS_AS(cfg.validate(), Error);

  JointVector outside = JointVector::Zero();
  outside[1] = kGeom.q_max[1] + 0.01;
  CHECK_THROWS_AS(TrajProblem::make(kGeom, outside, JointVector::Zero()), Error);
  CHECK_THROWS_AS(TrajProblem::make(kGeom, JointVector::Zero(), outside), Error);
  const TrajProblem p = TrajProblem::make(kGeom, JointVector::Zero(), JointVector::Zero());
  CHECK_THROWS_AS(assemble_and_solve(p, 0.0, 10), Error);
}

TEST_CASE("library minimum time agrees with the oracle") {
  for (double d : {0.0, 0.01, 0.5, 1.0, 3.0, -2.0}) {
    for (double v : {0.5, 1.5}) {
      CHECK(rest_to_rest_min_time(d, v, 2.0) == doctest::Approx(oracle_min_time(d, v, 2.0)));
    }
  }
}

TEST_CASE("trajectory export") {
  const JointVector q0 = JointVector::Zero();
  JointVector qf = JointVector::Zero();
  qf[0] = 0.5;
  const Trajectory t = assemble_and_solve(TrajProblem::make(kGeom, q0, qf));
  std::ostringstream csv;
  write_trajectory_csv(csv, t);
  const std::string text = csv.str();
  CHECK(text.rfind("k,t,q1,q2,q3,q4,q5,q6,q7,qd1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == t.intervals + 2);
  const auto j = nlohmann::json::parse(trajectory_report_json(t));
  CHECK(j.at("t_F").get<double>() == t.t_F);
  CHECK(j.at("converged").get<bool>());
}
