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
 * @file trajopt.hpp
 * @brief Rest-to-rest point-to-point motion by direct collocation.
 *
 * Each joint is a double integrator x = (q, qd), qdd = u, on N equal
 * intervals of length h = t_F / N with trapezoidal defects
 *
 *   q_{k+1} - q_k = h/2 (qd_k + qd_{k+1}),
 *   qd_{k+1} - qd_k = h/2 (u_k + u_{k+1}),
 *
 * box bounds on q, qd and u, and cost t_F + h/2 sum_{k=0..N} u_k^T R u_k.
 */

#ifndef SRSIK_TRAJOPT_HPP_
#define SRSIK_TRAJOPT_HPP_

#include "srsik/geometry.hpp"
#include "srsik/types.hpp"

#include <ostream>
#include <string>

namespace srsik {

using JointTrajectory = Eigen::Matrix<double, Eigen::Dynamic, kDof>;

struct TrajConfig {
  int intervals = 50;
  JointVector r_weight = JointVector::Constant(0.1);
  JointVector u_max = JointVector::Constant(2.0);  // rad/s^2
  double t_min = 0.1;                               // s
  double t_max = 30.0;                              // s
  double tol = 1e-6;
  int max_iters = 100;

  void validate() const;
};

struct TrajProblem {
  JointVector q0 = JointVector::Zero();
  JointVector q_goal = JointVector::Zero();
  JointVector q_max = JointVector::Zero();
  JointVector qd_max = JointVector::Zero();
  JointVector u_max = JointVector::Zero();
  JointVector r_weight = JointVector::Zero();
  int intervals = 50;
  double t_min = 0.1;
  double t_max = 30.0;

  /// Limits from `geom`, bounds and weights from `config`.
  static TrajProblem make(const RobotGeometry& geom, const JointVector& q0,
                          const JointVector& q_goal, const TrajConfig& config = {});

  /// Throws Error(kInvalidArgument) on bad sizes, non-positive bounds or
  /// end points outside the position limits.
  void validate() const;
};

struct TrajReport {
  int iterations = 0;     // outer evaluations of t_F
  int qp_iterations = 0;  // interior-point iterations over all joints
  double max_defect = 0.0;
  double max_bound_violation = 0.0;
  double max_boundary_error = 0.0;
  double stationarity = 0.0;
  bool converged = false;
};

struct Trajectory {
  double t_F = 0.0;
  int intervals = 0;
  JointTrajectory q;   // (N+1) x 7
  JointTrajectory qd;  // (N+1) x 7
  JointTrajectory u;   // (N+1) x 7
  double cost = 0.0;
  TrajReport report;

  [[nodiscard]] double step() const { return t_F / intervals; }
};

/// Solves the collocation problem with t_F free. A non-converged result is
/// returned with report.converged = false.
Trajectory assemble_and_solve(const TrajProblem& problem, double tol = 1e-6, int max_iters = 100);

struct TrajValidation {
  double max_defect = 0.0;
  int defect_interval = -1;  // interval k of the largest defect
  int defect_joint = -1;
  double max_bound_violation = 0.0;
  double max_boundary_error = 0.0;
  double cost = 0.0;

  [[nodiscard]] bool ok(double tol) const {
    return max_defect <= tol && max_bound_violation <= tol && max_boundary_error <= tol;
  }
};

TrajValidation validate_trajectory(const TrajProblem& problem, const Trajectory& traj);

/// Minimum duration of a rest-to-rest move over `distance` with velocity
/// and acceleration bounds (triangular or trapezoidal velocity profile).
double rest_to_rest_min_time(double distance, double v_max, double a_max);

/// Header `k,t,q1..q7,qd1..qd7,u1..u7`.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
std::string trajectory_report_json(const Trajectory& traj);

}  // namespace srsik

#endif  // SRSIK_TRAJOPT_HPP_
