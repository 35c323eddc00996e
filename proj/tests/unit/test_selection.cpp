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
#include "test_support.hpp"

#include <doctest.h>

#include <limits>
#include <sstream>

using namespace srsik;

namespace {

const RobotGeometry kGeom = RobotGeometry::iiwa14();
const SelectionWeights kW;

struct Case {
  JointVector q0;
  Pose target;
};

Case random_case(std::mt19937_64& rng) {
  return Case{test::random_q(kGeom, rng), forward_kinematics(kGeom, test::random_q(kGeom, rng))};
}

// Brute-force reference: every cell through the public single-shot API.
struct Brute {
  double cost = std::numeric_limits<double>::infinity();
  int cls = -1, j = -1;
};

Brute brute_force(const Case& c, int n_phi) {
  Brute b;
  for (int cls = 0; cls < kBranchCount; ++cls) {
    for (int j = 0; j < n_phi; ++j) {
      const IkSolution s = analytic_ik(kGeom, c.target, BranchClass{cls}.with_phi(j * kTwoPi / n_phi));
      if (s.degenerate() || !kGeom.within_limits(s.q)) continue;
      const double v = ik_cost(kGeom, kW, c.q0, s.q);
      if (v < b.cost) b = Brute{v, cls, j};
    }
  }
  return b;
}

}  // namespace

TEST_CASE("closeness is the largest joint deviation") {
  const JointVector q0 = JointVector::Zero();
  CHECK(closeness(q0, q0) == 0.0);
  const JointVector q = (JointVector() << 0.1, -0.3, 0, 0, 0, 0, 0.2).finished();
  CHECK(closeness(q0, q) == doctest::Approx(0.3));
}

TEST_CASE("cost terms") {
  const JointVector q = (JointVector() << 0.2, 0.7, -0.3, 1.2, 0.4, -0.9, 0.1).finished();
  const double m = manipulability_analytic(kGeom, q);
  CHECK(ik_cost(kGeom, kW, q, q) == doctest::Approx(kW.omega_m / m));
  JointVector straight = q;
  straight[3] = 0.0;
  CHECK(std::isinf(ik_cost(kGeom, kW, q, straight)));
  const SelectionWeights doubled{2 * kW.omega_m, 2 * kW.omega_c};
  const JointVector q0 = JointVector::Constant(0.1);
  CHECK(ik_cost(kGeom, doubled, q0, q) == doctest::Approx(2 * ik_cost(kGeom, kW, q0, q)));
}

TEST_CASE("bin edges and spans") {
  CHECK(bin_of(0.0, 8) == 0);
  CHECK(bin_of(kTwoPi * (1 - 1e-12), 8) == 7);
  CHECK(bin_of(kTwoPi, 8) == 7);
  for (int j = 0; j < 100; ++j) CHECK(bin_of_grid(j, 100, 8) == static_cast<int>(j * 8 / 100));
  CHECK(bin_span(0, 100, 8).first == 0);
  CHECK(bin_span(1, 100, 8).first == 13);
  CHECK(bin_span(7, 100, 8).first == 88);
  CHECK(bin_span(3, 100, 8).count == 13);
  // Every grid index of bin b lies in its span.
  for (int n_phi : {7, 36, 100, 101}) {
    for (int n_b : {1, 3, 7}) {
      for (int j = 0; j < n_phi; ++j) {
        const int b = bin_of_grid(j, n_phi, n_b);
        const GridSpan s = bin_span(b, n_phi, n_b);
        const int offset = ((j - s.first) % n_phi + n_phi) % n_phi;
        CHECK(offset < s.count);
      }
    }
  }
}

TEST_CASE("exhaustive search is the global minimum of the cost map") {
  std::mt19937_64 rng(31);
  int solved = 0;
  for (int k = 0; k < 60; ++k) {
    const Case c = random_case(rng);
    CostMap map;
    SelectionResult r;
    try {
      r = exhaustive_select(kGeom, kW, c.q0, c.target, 100, &map);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoFeasibleTarget);
      continue;
    }
    ++solved;
    CHECK(r.evaluations == 800);
    CHECK(kGeom.within_limits(r.q_star));
    CHECK(r.cost == doctest::Approx(ik_cost(kGeom, kW, c.q0, r.q_star)).epsilon(1e-14));
    int finite = 0;
    for (int cls = 0; cls < kBranchCount; ++cls) {
      for (int j = 0; j < 100; ++j) {
        const double v = map.at(cls, j);
        CHECK(r.cost <= v);
        if (std::isfinite(v)) {
          ++finite;
          CHECK(std::abs(ik_cost(kGeom, kW, c.q0, map.q_at(cls, j)) - v) <= 1e-12 * std::max(1.0, v));
        }
      }
    }
    CHECK(finite <= r.feasible_count);
    CHECK(map.at(r.branch.index, r.phi_index) == r.cost);
    // Pruned and unpruned searches agree.
    const SelectionResult fast = exhaustive_select(kGeom, kW, c.q0, c.target, 100);
    CHECK(fast.cost == r.cost);
    CHECK(fast.phi_index == r.phi_index);
    CHECK(fast.branch.index == r.branch.index);
    CHECK(fast.feasible_count == r.feasible_count);
    const Brute b = brute_force(c, 100);
    CHECK(b.cls == r.branch.index);
    CHECK(b.j == r.phi_index);
    // Positive scaling of both weights keeps the argmin.
    const SelectionResult scaled =
        exhaustive_select(kGeom, SelectionWeights{3 * kW.omega_m, 3 * kW.omega_c}, c.q0, c.target, 100);
    CHECK(scaled.phi_index == r.phi_index);
    CHECK(scaled.branch.index == r.branch.index);
  }
  CHECK(solved > 40);
}

TEST_CASE("guided search with the true cell matches the exhaustive optimum") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 200; ++k) {
    const Case c = random_case(rng);
    SelectionResult ex;
    try {
      ex = exhaustive_select(kGeom, kW, c.q0, c.target, 100);
    } catch (const Error&) {
      continue;
    }
    const Prediction truth{ex.branch, ex.bin(100, 8)};
    const SelectionResult g = guided_select(kGeom, kW, c.q0, c.target, truth, 100, 8);
    CHECK(g.fallback_level == 0);
    CHECK(g.evaluations == 13);
    CHECK(g.cost == ex.cost);
    // Any prediction is at least as expensive and never fails when exhaustive succeeds.
    for (int cls = 0; cls < kBranchCount; cls += 3) {
      for (int b = 0; b < 8; b += 3) {
        const SelectionResult w = guided_select(kGeom, kW, c.q0, c.target, Prediction{BranchClass{cls}, b}, 100, 8);
        CHECK(w.cost >= ex.cost);
        CHECK(kGeom.within_limits(w.q_star));
        if (w.fallback_level == 0) CHECK(w.evaluations == 13);
      }
    }
  }
}

TEST_CASE("cost map csv has eight rows and inf markers") {
  CostMap m;
  m.n_phi = 3;
  m.cost.assign(24, 1.5);
  m.cost[4] = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  write_costmap_csv(os, m);
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 8);
  CHECK(s.rfind("1.5,1.5,1.5\n1.5,inf,1.5\n", 0) == 0);
}

TEST_CASE("argument validation") {
  Pose t = forward_kinematics(kGeom, JointVector::Constant(0.3));
  CHECK_THROWS_AS(exhaustive_select(kGeom, kW, JointVector::Zero(), t, 0), Error);
  CHECK_THROWS_AS(guided_select(kGeom, kW, JointVector::Zero(), t, Prediction{BranchClass{8}, 0}, 100, 8), Error);
  CHECK_THROWS_AS(guided_select(kGeom, kW, JointVector::Zero(), t, Prediction{BranchClass{0}, 8}, 100, 8), Error);
  const SelectionWeights bad{0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), Error);
}
