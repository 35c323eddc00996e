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
 * @file montecarlo.hpp
 * @brief Target-resolution comparison over random (q0, target) pairs.
 *
 * Each pair is resolved by the learned pipeline (predict, guided search)
 * and by damped least squares started at q0, then planned with the
 * collocation solver. Outcomes are failed IK, failed PTP or success.
 */

#ifndef SRSIK_MONTECARLO_HPP_
#define SRSIK_MONTECARLO_HPP_

#include "srsik/config.hpp"
#include "srsik/mlp.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace srsik {

enum class Method { kNn, kDls };

const char* to_string(Method m);

struct MonteCarloOptions {
  int pairs = 1000;
  std::uint64_t seed = 7;
  bool run_nn = true;
  bool run_dls = true;
  int workers = 0;  // 0: hardware concurrency
};

struct PairOutcome {
  int index = 0;
  bool ik_ok = false;
  bool ptp_ok = false;
  JointVector q_target = JointVector::Zero();
  double closeness = 0.0;
  double manipulability = 0.0;
  double t_F = 0.0;
  double cost = 0.0;
  int detail = 0;  // learned: fallback level; DLS: iterations
  double ik_us = 0.0;
  double plan_ms = 0.0;

  [[nodiscard]] bool success() const { return ik_ok && ptp_ok; }
};

struct MethodSummary {
  int pairs = 0;
  int failed_ik = 0;
  int failed_ptp = 0;
  int successes = 0;
  double t_F_mean = 0.0, t_F_std = 0.0;    // over successes
  double cost_mean = 0.0, cost_std = 0.0;  // over successes
  double closeness_mean = 0.0;             // over resolved targets
  double ik_us_mean = 0.0;
  double plan_ms_mean = 0.0;

  [[nodiscard]] double success_rate() const { return pairs ? double(successes) / pairs : 0.0; }
};

MethodSummary summarize(const std::vector<PairOutcome>& outcomes);

struct MonteCarloResult {
  MonteCarloOptions options;
  std::vector<PairOutcome> nn;
  std::vector<PairOutcome> dls;
  int workers = 0;
  double seconds = 0.0;
};

using PairProgressFn = std::function<void(int done, int total)>;

/// `model` may be null when only DLS runs. Throws Error(kModelMismatch) when
/// the model was trained for another geometry.
MonteCarloResult run_monte_carlo(const RunConfig& config, const ModelFile* model,
                                 const MonteCarloOptions& options,
                                 const PairProgressFn& progress = {});

/// One row per pair and method.
void write_outcomes_csv(std::ostream& out, const MonteCarloResult& result);

/// {"pairs", "seed", "methods": {...}, "paired": {...}, "timing": {...}}.
/// Everything outside "timing" depends only on the inputs.
std::string monte_carlo_summary_json(const MonteCarloResult& result);

}  // namespace srsik

#endif  // SRSIK_MONTECARLO_HPP_
