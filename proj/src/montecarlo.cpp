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

#include "srsik/montecarlo.hpp"

#include "srsik/analytic_ik.hpp"
#include "srsik/dataset.hpp"
#include "srsik/kinematics.hpp"
#include "srsik/numeric_ik.hpp"
#include "srsik/selection.hpp"
#include "srsik/trajopt.hpp"

#include "json_util.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace srsik {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since, double scale) {
  return std::chrono::duration<double>(Clock::now() - since).count() * scale;
}

// Wraps each angle into (-pi, pi].
JointVector wrap_pi(const JointVector& q) {
  JointVector out;
  for (int i = 0; i < kDof; ++i) {
    double a = std::remainder(q[i], kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    out[i] = a;
  }
  return out;
}

void plan(const RunConfig& cfg, const JointVector& q0, PairOutcome& o) {
  const auto start = Clock::now();
  const TrajProblem p = TrajProblem::make(cfg.robot, q0, o.q_target, cfg.trajopt);
  const Trajectory t = assemble_and_solve(p, cfg.trajopt.tol, cfg.trajopt.max_iters);
  o.plan_ms = elapsed(start, 1e3);
  o.ptp_ok = t.report.converged;
  o.t_F = t.t_F;
  o.cost = t.cost;
}

PairOutcome resolve_nn(const RunConfig& cfg, const ModelFile& model, const Pair& pair) {
  PairOutcome o;
  const auto start = Clock::now();
  try {
    const PredictResult pred = model.net.predict(encode_features(pair.q0, pair.target));
    const SelectionResult r = guided_select(cfg.robot, cfg.selection.weights, pair.q0, pair.target,
                                            pred.prediction, model.n_phi, model.net.n_b());
    o.ik_us = elapsed(start, 1e6);
    o.ik_ok = true;
    o.q_target = r.q_star;
    o.detail = r.fallback_level;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoFeasibleTarget && e.code() != ErrorCode::kUnreachable) throw;
    o.ik_us = elapsed(start, 1e6);
    return o;
  }
  o.closeness = closeness(pair.q0, o.q_target);
  o.manipulability = manipulability_analytic(cfg.robot, o.q_target);
  plan(cfg, pair.q0, o);
  return o;
}

PairOutcome resolve_dls(const RunConfig& cfg, const Pair& pair) {
  PairOutcome o;
  const auto start = Clock::now();
  const DlsResult r = dls_solve(cfg.robot, pair.target, pair.q0, cfg.dls);
  o.ik_us = elapsed(start, 1e6);
  o.detail = r.iterations;
  o.q_target = wrap_pi(r.q);
  o.ik_ok = r.converged && cfg.robot.within_limits(o.q_target);
  if (!o.ik_ok) return o;
  o.closeness = closeness(pair.q0, o.q_target);
  o.manipulability = manipulability_analytic(cfg.robot, o.q_target);
  plan(cfg, pair.q0, o);
  return o;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

nlohmann::json method_json(const MethodSummary& s) {
  return {{"pairs", s.pairs},
          {"failed_ik", s.failed_ik},
          {"failed_ptp", s.failed_ptp},
          {"successes", s.successes},
          {"success_rate", s.success_rate()},
          {"t_F", {{"mean", s.t_F_mean}, {"std", s.t_F_std}}},
          {"cost", {{"mean", s.cost_mean}, {"std", s.cost_std}}},
          {"closeness_mean", s.closeness_mean}};
}

}  // namespace

const char* to_string(Method m) { return m == Method::kNn ? "nn" : "dls"; }

MethodSummary summarize(const std::vector<PairOutcome>& outcomes) {
  MethodSummary s;
  s.pairs = static_cast<int>(outcomes.size());
  std::vector<double> t, c, close, ik, pl;
  for (const PairOutcome& o : outcomes) {
    ik.push_back(o.ik_us);
    if (!o.ik_ok) {
      ++s.failed_ik;
      continue;
    }
    close.push_back(o.closeness);
    pl.push_back(o.plan_ms);
    if (!o.ptp_ok) {
      ++s.failed_ptp;
      continue;
    }
    ++s.successes;
    t.push_back(o.t_F);
    c.push_back(o.cost);
  }
  const MeanStd mt = mean_std(t), mc = mean_std(c);
  s.t_F_mean = mt.mean;
  s.t_F_std = mt.std;
  s.cost_mean = mc.mean;
  s.cost_std = mc.std;
  s.closeness_mean = mean_std(close).mean;
  s.ik_us_mean = mean_std(ik).mean;
  s.plan_ms_mean = mean_std(pl).mean;
  return s;
}

MonteCarloResult run_monte_carlo(const RunConfig& config, const ModelFile* model,
                                 const MonteCarloOptions& options,
                                 const PairProgressFn& progress) {
  config.validate();
  if (options.pairs < 1) throw Error(ErrorCode::kInvalidArgument, "monte carlo: pairs must be positive");
  if (!options.run_nn && !options.run_dls) {
    throw Error(ErrorCode::kInvalidArgument, "monte carlo: no method selected");
  }
  if (options.run_nn) {
    if (model == nullptr) throw Error(ErrorCode::kInvalidArgument, "monte carlo: learned mode needs a model");
    if (model->geometry_hash != config.robot.hash()) {
      throw Error(ErrorCode::kModelMismatch, "monte carlo: model was trained for a different robot geometry");
    }
  }

  MonteCarloResult res;
  res.options = options;
  const auto n = static_cast<std::size_t>(options.pairs);
  if (options.run_nn) res.nn.resize(n);
  if (options.run_dls) res.dls.resize(n);
  const int hw = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  res.workers = std::clamp(options.workers > 0 ? options.workers : hw, 1, options.pairs);

  const auto start = Clock::now();
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    try {
      for (int i = next++; i < options.pairs; i = next++) {
        SampleRng rng(options.seed, static_cast<std::uint64_t>(i));
        const Pair pair = sample_pair(config.robot, rng);
        const auto k = static_cast<std::size_t>(i);
        if (options.run_nn) {
          res.nn[k] = resolve_nn(config, *model, pair);
          res.nn[k].index = i;
        }
        if (options.run_dls) {
          res.dls[k] = resolve_dls(config, pair);
          res.dls[k].index = i;
        }
        const int d = ++done;
        if (progress) {
          const std::lock_guard<std::mutex> lock(progress_mutex);
          progress(d, options.pairs);
        }
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = options.pairs;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < res.workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  res.seconds = elapsed(start, 1.0);
  return res;
}

void write_outcomes_csv(std::ostream& out, const MonteCarloResult& result) {
  out << "index,method,ik_ok,ptp_ok,success,t_F,cost,closeness,manipulability,detail,ik_us,plan_ms";
  for (int i = 1; i <= kDof; ++i) out << ",q" << i;
  out << '\n';
  const auto old_precision = out.precision(17);
  auto rows = [&](const std::vector<PairOutcome>& v, Method m) {
    for (const PairOutcome& o : v) {
      out << o.index << ',' << to_string(m) << ',' << o.ik_ok << ',' << o.ptp_ok << ','
          << o.success() << ',' << o.t_F << ',' << o.cost << ',' << o.closeness << ','
          << o.manipulability << ',' << o.detail << ',' << o.ik_us << ',' << o.plan_ms;
      for (int i = 0; i < kDof; ++i) out << ',' << o.q_target[i];
      out << '\n';
    }
  };
  rows(result.nn, Method::kNn);
  rows(result.dls, Method::kDls);
  out.precision(old_precision);
}

std::string monte_carlo_summary_json(const MonteCarloResult& result) {
  nlohmann::json methods = nlohmann::json::object();
  nlohmann::json timing = {{"workers", result.workers}, {"seconds", result.seconds}};
  auto add = [&](const std::vector<PairOutcome>& v, Method m) {
    if (v.empty()) return;
    const MethodSummary s = summarize(v);
    methods[to_string(m)] = method_json(s);
    timing[to_string(m)] = {{"ik_us_mean", s.ik_us_mean}, {"plan_ms_mean", s.plan_ms_mean}};
  };
  add(result.nn, Method::kNn);
  add(result.dls, Method::kDls);

  nlohmann::json j = {{"pairs", result.options.pairs},
                      {"seed", result.options.seed},
                      {"methods", methods}};
  if (!result.nn.empty() && !result.dls.empty()) {
    std::vector<PairOutcome> a, b;
    for (std::size_t i = 0; i < result.nn.size(); ++i) {
      if (result.nn[i].success() && result.dls[i].success()) {
        a.push_back(result.nn[i]);
        b.push_back(result.dls[i]);
      }
    }
    const MethodSummary sa = summarize(a), sb = summarize(b);
    j["paired"] = {{"pairs", sa.pairs},
                   {"nn", {{"t_F_mean", sa.t_F_mean}, {"cost_mean", sa.cost_mean}}},
                   {"dls", {{"t_F_mean", sb.t_F_mean}, {"cost_mean", sb.cost_mean}}}};
  }
  j["timing"] = timing;
  return j.dump(2);
}

}  // namespace srsik
