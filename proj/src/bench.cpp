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

#include "srsik/bench.hpp"

#include "srsik/analytic_ik.hpp"
#include "srsik/dataset.hpp"
#include "srsik/kinematics.hpp"
#include "srsik/numeric_ik.hpp"
#include "srsik/selection.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <chrono>

namespace srsik {
namespace {

using Clock = std::chrono::steady_clock;

// Published per-call figures in nanoseconds.
constexpr double kRefAik = 1.8e3;
constexpr double kRefManipulability = 0.15e3;
constexpr double kRefGuided = 32e3;
constexpr double kRefDls = 3e6;

volatile double g_sink = 0.0;

template <class F>
BenchEntry measure(const std::string& name, const BenchOptions& opt, std::size_t n, F&& call,
                   double reference_ns = 0.0) {
  BenchEntry e;
  e.name = name;
  e.ops = static_cast<std::int64_t>(n);
  e.warmup = opt.warmup;
  e.repetitions = opt.repetitions;
  e.reference_ns = reference_ns;
  if (n == 0) return e;
  double sink = 0.0;
  for (int w = 0; w < opt.warmup; ++w) sink += call(static_cast<std::size_t>(w) % n);
  std::vector<double> passes;
  for (int r = 0; r < opt.repetitions; ++r) {
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < n; ++i) sink += call(i);
    const double ns = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
    passes.push_back(ns / static_cast<double>(n));
  }
  g_sink = g_sink + sink;
  std::nth_element(passes.begin(), passes.begin() + static_cast<long>(passes.size() / 2), passes.end());
  e.ns_per_op = passes[passes.size() / 2];
  return e;
}

}  // namespace

void BenchOptions::validate() const {
  if (targets < 1 || warmup < 0 || repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bench: targets and repetitions must be positive");
  }
}

const BenchEntry* BenchReport::find(const std::string& name) const {
  for (const BenchEntry& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

BenchReport run_bench(const RunConfig& config, const ModelFile* model, const BenchOptions& options) {
  config.validate();
  options.validate();
  const RobotGeometry& geom = config.robot;
  const SelectionWeights& w = config.selection.weights;

  BenchReport rep;
  rep.options = options;
  rep.trained_model = model != nullptr;
  if (model != nullptr && model->geometry_hash != geom.hash()) {
    throw Error(ErrorCode::kModelMismatch, "bench: model was trained for a different robot geometry");
  }
  const Mlp net = model != nullptr ? model->net : Mlp::init(config.selection.n_b, options.seed);
  const int n_phi = model != nullptr ? model->n_phi : config.selection.n_phi;

  const auto n = static_cast<std::size_t>(options.targets);
  std::vector<Pair> pairs;
  std::vector<RedundancyParams> params;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SampleRng rng(options.seed, i);
    pairs.push_back(sample_pair(geom, rng));
    const int cls = static_cast<int>(rng.uniform() * kBranchCount) % kBranchCount;
    params.push_back(BranchClass{cls}.with_phi(rng.uniform(0.0, kTwoPi)));
  }

  auto guided = [&](const Pair& p) {
    const PredictResult pred = net.predict(encode_features(p.q0, p.target));
    return guided_select(geom, w, p.q0, p.target, pred.prediction, n_phi, net.n_b());
  };

  // Paired set: targets both resolvers handle.
  std::vector<Pair> paired;
  for (const Pair& p : pairs) {
    if (!dls_solve(geom, p.target, p.q0, config.dls).converged) continue;
    try {
      (void)guided(p);
    } catch (const Error&) {
      continue;
    }
    paired.push_back(p);
  }
  rep.dls_converged = static_cast<int>(paired.size());

  rep.entries.push_back(measure(
      "aik", options, n,
      [&](std::size_t i) { return analytic_ik(geom, pairs[i].target, params[i]).q[0]; }, kRefAik));
  rep.entries.push_back(measure(
      "manipulability_analytic", options, n,
      [&](std::size_t i) { return manipulability_analytic(geom, pairs[i].q0); }, kRefManipulability));
  rep.entries.push_back(measure("manipulability_det", options, n, [&](std::size_t i) {
    return manipulability_det(geom, pairs[i].q0);
  }));
  rep.entries.push_back(measure("nn_inference", options, n, [&](std::size_t i) {
    return net.predict(encode_features(pairs[i].q0, pairs[i].target)).confidence_class;
  }));
  rep.entries.push_back(measure(
      "guided_select_end_to_end", options, paired.size(),
      [&](std::size_t i) { return guided(paired[i]).cost; }, kRefGuided));
  rep.entries.push_back(measure(
      "dls_to_convergence", options, paired.size(),
      [&](std::size_t i) {
        return dls_solve(geom, paired[i].target, paired[i].q0, config.dls).error_norm;
      },
      kRefDls));
  rep.entries.push_back(measure("exhaustive_select", options, std::min<std::size_t>(n, 200),
                                [&](std::size_t i) {
                                  try {
                                    return exhaustive_select(geom, w, pairs[i].q0, pairs[i].target,
                                                             n_phi)
                                        .cost;
                                  } catch (const Error&) {
                                    return 0.0;
                                  }
                                }));

  const BenchEntry* g = rep.find("guided_select_end_to_end");
  const BenchEntry* d = rep.find("dls_to_convergence");
  if (g->ns_per_op > 0.0) rep.guided_vs_dls = d->ns_per_op / g->ns_per_op;
  const double ma = rep.find("manipulability_analytic")->ns_per_op;
  if (ma > 0.0) rep.det_vs_analytic = rep.find("manipulability_det")->ns_per_op / ma;
  return rep;
}

std::string bench_report_json(const BenchReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const BenchEntry& e : report.entries) {
    nlohmann::json j = {{"name", e.name},
                        {"ns_per_op", e.ns_per_op},
                        {"ops", e.ops},
                        {"warmup", e.warmup},
                        {"repetitions", e.repetitions}};
    if (e.reference_ns > 0.0) {
      j["reference_ns"] = e.reference_ns;
      j["speedup_vs_reference"] = e.ns_per_op > 0.0 ? e.reference_ns / e.ns_per_op : 0.0;
    }
    entries.push_back(j);
  }
  const nlohmann::json out = {
      {"targets", report.options.targets},
      {"seed", report.options.seed},
      {"trained_model", report.trained_model},
      {"paired_targets", report.dls_converged},
      {"entries", entries},
      {"ratios",
       {{"dls_over_guided", report.guided_vs_dls},
        {"reference_dls_over_guided", kRefDls / kRefGuided},
        {"det_over_analytic_manipulability", report.det_vs_analytic}}}};
  return out.dump(2);
}

}  // namespace srsik
