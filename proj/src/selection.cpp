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

#include "srsik/selection.hpp"

#include "srsik/kinematics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

namespace srsik {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Best {
  double cost = kInf;
  int cls = -1;
  int j = -1;
  JointVector q = JointVector::Zero();

  void offer(double c, int cls_, int j_, const JointVector& q_) {
    if (c < cost || (c == cost && cls >= 0 && (cls_ < cls || (cls_ == cls && j_ < j)))) {
      cost = c;
      cls = cls_;
      j = j_;
      q = q_;
    }
  }
};

// Evaluates cells on demand; every cell is solved at most once.
class CellEvaluator {
 public:
  CellEvaluator(const RobotGeometry& geom, const SelectionWeights& w, const JointVector& q0,
                const Pose& target, int n_phi)
      : geom_(geom), w_(w), q0_(q0), ik_(geom, target), n_phi_(n_phi),
        visited_(static_cast<std::size_t>(kBranchCount * n_phi), 0),
        sin_(static_cast<std::size_t>(n_phi), kNaN), cos_(static_cast<std::size_t>(n_phi)) {}

  void evaluate(int cls, int j, CostMap* map) {
    const auto idx = static_cast<std::size_t>(cls * n_phi_ + j);
    if (visited_[idx]) return;
    visited_[idx] = 1;
    ++evaluations_;
    const auto sj = static_cast<std::size_t>(j);
    if (std::isnan(sin_[sj])) {
      const double phi = phi_grid(j, n_phi_);
      sin_[sj] = std::sin(phi);
      cos_[sj] = std::cos(phi);
    }
    const IkSolution sol = ik_.solve(BranchClass{cls}, sin_[sj], cos_[sj]);
    double c = kInf;
    if (!sol.degenerate() && geom_.within_limits(sol.q)) {
      ++feasible_;
      // Without a map, a candidate whose closeness term alone exceeds the
      // incumbent cannot win.
      if (map == nullptr && w_.omega_c * closeness(q0_, sol.q) > best_.cost) return;
      c = ik_cost(geom_, w_, q0_, sol.q);
    }
    if (map != nullptr) {
      map->cost[idx] = c;
      map->q[idx] = sol.q;
      map->degeneracy[idx] = sol.degeneracy;
    }
    if (std::isfinite(c)) best_.offer(c, cls, j, sol.q);
  }

  [[nodiscard]] bool found() const { return best_.cls >= 0; }

  [[nodiscard]] SelectionResult result(int level) const {
    SelectionResult r;
    r.q_star = best_.q;
    r.branch = BranchClass{best_.cls};
    r.phi_index = best_.j;
    r.params_star = r.branch.with_phi(phi_grid(best_.j, n_phi_));
    r.cost = best_.cost;
    r.feasible_count = feasible_;
    r.evaluations = evaluations_;
    r.fallback_level = level;
    return r;
  }

 private:
  const RobotGeometry& geom_;
  const SelectionWeights& w_;
  const JointVector& q0_;
  IkTarget ik_;
  int n_phi_;
  std::vector<char> visited_;
  std::vector<double> sin_, cos_;
  Best best_;
  int evaluations_ = 0;
  int feasible_ = 0;
};

void check_grid(int n_phi, int n_b) {
  if (n_phi < 1) throw Error(ErrorCode::kInvalidArgument, "n_phi must be >= 1");
  if (n_b < 1 || n_b > n_phi) throw Error(ErrorCode::kInvalidArgument, "n_b must be in [1, n_phi]");
}

}  // namespace

void SelectionWeights::validate() const {
  if (!(omega_m > 0.0) || !(omega_c > 0.0) || !std::isfinite(omega_m) || !std::isfinite(omega_c)) {
    throw Error(ErrorCode::kInvalidArgument, "selection weights must be positive and finite");
  }
}

void SelectionConfig::validate() const {
  weights.validate();
  check_grid(n_phi, n_b);
}

double closeness(const JointVector& q0, const JointVector& q) { return (q0 - q).cwiseAbs().maxCoeff(); }

double ik_cost(const RobotGeometry& geom, const SelectionWeights& w, const JointVector& q0,
               const JointVector& q) {
  const double m = manipulability_analytic(geom, q);
  if (!(m >= kManipulabilityFloor)) return kInf;
  return w.omega_m / m + w.omega_c * closeness(q0, q);
}

double phi_grid(int j, int n_phi) { return static_cast<double>(j) * kTwoPi / n_phi; }

int bin_of(double phi, int n_b) {
  const int b = static_cast<int>(std::floor(phi / (kTwoPi / n_b)));
  return std::clamp(b, 0, n_b - 1);
}

int bin_of_grid(int j, int n_phi, int n_b) {
  return static_cast<int>((static_cast<long long>(j) * n_b) / n_phi);
}

GridSpan bin_span(int bin, int n_phi, int n_b) {
  check_grid(n_phi, n_b);
  if (bin < 0 || bin >= n_b) throw Error(ErrorCode::kInvalidArgument, "bin index out of range");
  const long long first = (static_cast<long long>(bin) * n_phi + n_b - 1) / n_b;
  return GridSpan{static_cast<int>(first % n_phi), (n_phi + n_b - 1) / n_b};
}

void write_costmap_csv(std::ostream& out, const CostMap& map) {
  out << std::setprecision(17);
  for (int c = 0; c < kBranchCount; ++c) {
    for (int j = 0; j < map.n_phi; ++j) {
      if (j > 0) out << ',';
      const double v = map.at(c, j);
      if (std::isfinite(v)) {
        out << v;
      } else {
        out << "inf";
      }
    }
    out << '\n';
  }
}

SelectionResult exhaustive_select(const RobotGeometry& geom, const SelectionWeights& w,
                                  const JointVector& q0, const Pose& target, int n_phi,
                                  CostMap* map) {
  check_grid(n_phi, 1);
  CellEvaluator ev(geom, w, q0, target, n_phi);
  if (map != nullptr) {
    const auto cells = static_cast<std::size_t>(kBranchCount * n_phi);
    map->n_phi = n_phi;
    map->cost.assign(cells, kInf);
    map->q.assign(cells, JointVector::Zero());
    map->degeneracy.assign(cells, 0U);
  }
  for (int c = 0; c < kBranchCount; ++c) {
    for (int j = 0; j < n_phi; ++j) ev.evaluate(c, j, map);
  }
  if (!ev.found()) throw Error(ErrorCode::kNoFeasibleTarget, "no feasible cell on the search grid");
  return ev.result(0);
}

SelectionResult guided_select(const RobotGeometry& geom, const SelectionWeights& w,
                              const JointVector& q0, const Pose& target,
                              const Prediction& prediction, int n_phi, int n_b) {
  check_grid(n_phi, n_b);
  const int cls = prediction.branch.index;
  if (cls < 0 || cls >= kBranchCount) throw Error(ErrorCode::kInvalidArgument, "class index out of range");
  if (prediction.bin < 0 || prediction.bin >= n_b) {
    throw Error(ErrorCode::kInvalidArgument, "bin index out of range");
  }
  CellEvaluator ev(geom, w, q0, target, n_phi);
  auto scan_bin = [&](int b) {
    const GridSpan s = bin_span(((b % n_b) + n_b) % n_b, n_phi, n_b);
    for (int k = 0; k < s.count; ++k) ev.evaluate(cls, (s.first + k) % n_phi, nullptr);
  };

  scan_bin(prediction.bin);
  if (ev.found()) return ev.result(0);
  scan_bin(prediction.bin - 1);
  scan_bin(prediction.bin + 1);
  if (ev.found()) return ev.result(1);
  for (int j = 0; j < n_phi; ++j) ev.evaluate(cls, j, nullptr);
  if (ev.found()) return ev.result(2);
  for (int c = 0; c < kBranchCount; ++c) {
    for (int j = 0; j < n_phi; ++j) ev.evaluate(c, j, nullptr);
  }
  if (ev.found()) return ev.result(3);
  throw Error(ErrorCode::kNoFeasibleTarget, "no feasible cell on the search grid");
}

}  // namespace srsik
