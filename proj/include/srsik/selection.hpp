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
 * @file selection.hpp
 * @brief Choice of the redundancy parameters for a target pose.
 *
 * Candidates are the 8 branch classes times the arm-angle grid
 * phi_j = j 2 pi / n_phi, j = 0..n_phi-1. A candidate is feasible when its
 * AIK output is non-degenerate and inside the joint limits; its cost is
 * omega_m / m(q) + omega_c |q0 - q|_inf.
 */

#ifndef SRSIK_SELECTION_HPP_
#define SRSIK_SELECTION_HPP_

#include "srsik/analytic_ik.hpp"
#include "srsik/geometry.hpp"
#include "srsik/types.hpp"

#include <ostream>
#include <vector>

namespace srsik {

/// Below this manipulability the cost is +inf.
inline constexpr double kManipulabilityFloor = 1e-6;

struct SelectionWeights {
  double omega_m = 0.05;
  double omega_c = 1.0;

  void validate() const;
};

struct SelectionConfig {
  SelectionWeights weights;
  int n_phi = 100;
  int n_b = 8;

  void validate() const;
};

double closeness(const JointVector& q0, const JointVector& q);

double ik_cost(const RobotGeometry& geom, const SelectionWeights& w, const JointVector& q0,
               const JointVector& q);

/// Grid value j 2 pi / n_phi.
double phi_grid(int j, int n_phi);

/// floor(phi / (2 pi / n_b)), clamped to [0, n_b - 1].
int bin_of(double phi, int n_b);

/// Bin of grid point j, computed in integers: floor(j n_b / n_phi).
int bin_of_grid(int j, int n_phi, int n_b);

/// First grid index and number of grid points searched for bin b:
/// ceil(n_phi / n_b) consecutive indices (mod n_phi) from ceil(b n_phi / n_b).
struct GridSpan {
  int first = 0;
  int count = 0;
};
GridSpan bin_span(int bin, int n_phi, int n_b);

struct SelectionResult {
  JointVector q_star = JointVector::Zero();
  RedundancyParams params_star;
  BranchClass branch;
  int phi_index = 0;
  double cost = 0.0;
  /// Evaluated candidates that are non-degenerate and inside the limits.
  int feasible_count = 0;
  int evaluations = 0;
  /// 0: predicted bin, 1: neighbouring bins, 2: all bins of the predicted
  /// class, 3: every class. Always 0 for the exhaustive search.
  int fallback_level = 0;

  [[nodiscard]] int bin(int n_phi, int n_b) const { return bin_of_grid(phi_index, n_phi, n_b); }
};

/// 8 x n_phi costs (+inf when infeasible), row = class index.
struct CostMap {
  int n_phi = 0;
  std::vector<double> cost;
  std::vector<JointVector> q;
  std::vector<unsigned> degeneracy;

  [[nodiscard]] double at(int cls, int j) const { return cost[static_cast<std::size_t>(cls * n_phi + j)]; }
  [[nodiscard]] const JointVector& q_at(int cls, int j) const {
    return q[static_cast<std::size_t>(cls * n_phi + j)];
  }
};

void write_costmap_csv(std::ostream& out, const CostMap& map);

/// Global minimum over all 8 n_phi cells. Ties go to the lowest class, then
/// the lowest grid index. Throws Error(kUnreachable) or
/// Error(kNoFeasibleTarget).
SelectionResult exhaustive_select(const RobotGeometry& geom, const SelectionWeights& w,
                                  const JointVector& q0, const Pose& target, int n_phi,
                                  CostMap* map = nullptr);

struct Prediction {
  BranchClass branch;
  int bin = 0;
};

/// Searches the grid points of the predicted bin with the predicted flags and
/// escalates through the fallback levels until a feasible cell is found.
SelectionResult guided_select(const RobotGeometry& geom, const SelectionWeights& w,
                              const JointVector& q0, const Pose& target,
                              const Prediction& prediction, int n_phi, int n_b);

}  // namespace srsik

#endif  // SRSIK_SELECTION_HPP_
