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

#include "srsik/srsik.h"

#include "srsik/analytic_ik.hpp"
#include "srsik/bench.hpp"
#include "srsik/config.hpp"
#include "srsik/dataset.hpp"
#include "srsik/kinematics.hpp"
#include "srsik/mlp.hpp"
#include "srsik/montecarlo.hpp"
#include "srsik/numeric_ik.hpp"
#include "srsik/selection.hpp"
#include "srsik/trajopt.hpp"

#include "binary_io.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <new>
#include <string>
#include <thread>

#ifndef SRSIK_VERSION_STRING
#define SRSIK_VERSION_STRING "0.0.0"
#endif

struct srsik_context {
  srsik::RunConfig config;
};

struct srsik_model {
  srsik::ModelFile file;
};

struct srsik_string {
  std::string text;
};

namespace {

using namespace srsik;

thread_local std::string t_last_error;

srsik_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return SRSIK_E_INVALID_ARGUMENT;
    case ErrorCode::kParse: return SRSIK_E_PARSE;
    case ErrorCode::kIo: return SRSIK_E_IO;
    case ErrorCode::kUnreachable: return SRSIK_E_UNREACHABLE;
    case ErrorCode::kNoFeasibleTarget: return SRSIK_E_NO_FEASIBLE_TARGET;
    case ErrorCode::kGeometryMismatch: return SRSIK_E_GEOMETRY_MISMATCH;
    case ErrorCode::kTrainingDiverged: return SRSIK_E_TRAINING_DIVERGED;
    case ErrorCode::kModelMismatch: return SRSIK_E_MODEL_MISMATCH;
  }
  return SRSIK_E_INTERNAL;
}

template <class F>
srsik_status guarded(F&& body) noexcept {
  try {
    body();
    return SRSIK_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
  } catch (const std::exception& e) {
    t_last_error = e.what();
  } catch (...) {
    t_last_error = "unknown failure";
  }
  return SRSIK_E_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

JointVector joints(const double* q) {
  require(q != nullptr, "joint vector is null");
  JointVector v;
  for (int i = 0; i < kDof; ++i) v[i] = q[i];
  require(v.allFinite(), "joint vector is not finite");
  return v;
}

void put(const JointVector& v, double* out) {
  for (int i = 0; i < kDof; ++i) out[i] = v[i];
}

Pose pose(const double* R, const double* p) {
  require(R != nullptr && p != nullptr, "pose is null");
  Pose x;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) x.R(r, c) = R[3 * r + c];
    x.p[r] = p[r];
  }
  require(x.R.allFinite() && x.p.allFinite(), "pose is not finite");
  require(x.is_valid(1e-6), "rotation is not orthonormal with determinant +1");
  return x;
}

void put_selection(const SelectionResult& r, int n_phi, int n_b, srsik_selection* out) {
  put(r.q_star, out->q);
  out->js = r.params_star.js;
  out->je = r.params_star.je;
  out->jw = r.params_star.jw;
  out->phi = r.params_star.phi;
  out->branch_class = r.branch.index;
  out->phi_index = r.phi_index;
  out->bin = r.bin(n_phi, n_b);
  out->cost = r.cost;
  out->evaluations = r.evaluations;
  out->feasible_count = r.feasible_count;
  out->fallback_level = r.fallback_level;
}

void give(std::string text, srsik_string** out) {
  require(out != nullptr, "output pointer is null");
  *out = new srsik_string{std::move(text)};
}

std::ofstream open_out(const char* path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kIo, std::string("cannot write ") + path);
  f.precision(17);
  return f;
}

void check_model(const RunConfig& cfg, const ModelFile& m) {
  if (m.geometry_hash != cfg.robot.hash()) {
    throw Error(ErrorCode::kModelMismatch, "model was trained for a different robot geometry");
  }
}

nlohmann::json evaluation_json(const Evaluation& e) {
  return {{"count", e.count},           {"acc_class", e.acc_class}, {"acc_bin", e.acc_bin},
          {"acc_joint", e.acc_joint},   {"loss_class", e.loss_class},
          {"loss_bin", e.loss_bin}};
}

}  // namespace

extern "C" {

const char* srsik_version(void) { return SRSIK_VERSION_STRING; }

const char* srsik_status_name(srsik_status status) {
  switch (status) {
    case SRSIK_OK: return "ok";
    case SRSIK_E_INTERNAL: return "internal";
    default: break;
  }
  const int i = static_cast<int>(status);
  if (i >= 1 && i <= 8) return srsik::to_string(static_cast<ErrorCode>(i - 1));
  return "unknown";
}

const char* srsik_last_error(void) { return t_last_error.c_str(); }

const char* srsik_string_data(const srsik_string* s) { return s ? s->text.c_str() : ""; }
size_t srsik_string_size(const srsik_string* s) { return s ? s->text.size() : 0; }
void srsik_string_destroy(srsik_string* s) { delete s; }

srsik_status srsik_file_hash(const char* path, uint64_t* out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, std::string("cannot read ") + path);
    std::uint64_t h = 14695981039346656037ULL;
    char buf[1 << 16];
    while (f) {
      f.read(buf, sizeof buf);
      h = detail::fnv1a(buf, static_cast<std::size_t>(f.gcount()), h);
    }
    *out = h;
  });
}

// ---- context ---------------------------------------------------------

srsik_status srsik_context_create(const char* config_path, srsik_context** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    RunConfig cfg = config_path ? load_run_config(config_path) : RunConfig{};
    cfg.validate();
    *out = new srsik_context{std::move(cfg)};
  });
}

srsik_status srsik_context_create_json(const char* json, srsik_context** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new srsik_context{parse_run_config(json)};
  });
}

void srsik_context_destroy(srsik_context* ctx) { delete ctx; }

srsik_status srsik_context_config_json(const srsik_context* ctx, srsik_string** out) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    give(run_config_to_json(ctx->config), out);
  });
}

uint64_t srsik_context_geometry_hash(const srsik_context* ctx) {
  return ctx ? ctx->config.robot.hash() : 0;
}

srsik_status srsik_context_set_grid(srsik_context* ctx, int n_phi, int n_b) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    SelectionConfig s = ctx->config.selection;
    if (n_phi > 0) s.n_phi = n_phi;
    if (n_b > 0) s.n_b = n_b;
    s.validate();
    ctx->config.selection = s;
  });
}

srsik_status srsik_context_set_weights(srsik_context* ctx, double omega_m, double omega_c) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    SelectionWeights w = ctx->config.selection.weights;
    if (omega_m > 0.0) w.omega_m = omega_m;
    if (omega_c > 0.0) w.omega_c = omega_c;
    w.validate();
    ctx->config.selection.weights = w;
  });
}

srsik_status srsik_context_set_training(srsik_context* ctx, int epochs, int batch_size,
                                        double learning_rate, double l2, uint64_t seed) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    TrainConfig t = ctx->config.training;
    if (epochs > 0) t.epochs = epochs;
    if (batch_size > 0) t.batch_size = batch_size;
    if (learning_rate > 0.0) t.learning_rate = learning_rate;
    if (l2 > 0.0) t.l2 = l2;
    if (seed > 0) t.seed = seed;
    t.validate();
    ctx->config.training = t;
  });
}

// ---- kinematics ------------------------------------------------------

srsik_status srsik_fk(const srsik_context* ctx, const double q[7], double R[9], double p[3]) {
  return guarded([&] {
    require(ctx != nullptr && R != nullptr && p != nullptr, "null argument");
    const Pose x = forward_kinematics(ctx->config.robot, joints(q));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) R[3 * r + c] = x.R(r, c);
      p[r] = x.p[r];
    }
  });
}

srsik_status srsik_manipulability(const srsik_context* ctx, const double q[7], double* analytic,
                                  double* det) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    const JointVector v = joints(q);
    if (analytic) *analytic = manipulability_analytic(ctx->config.robot, v);
    if (det) *det = manipulability_det(ctx->config.robot, v);
  });
}

srsik_status srsik_ik(const srsik_context* ctx, const double R[9], const double p[3], int js, int je,
                      int jw, double phi, double q[7], unsigned* degeneracy) {
  return guarded([&] {
    require(ctx != nullptr && q != nullptr, "null argument");
    const IkSolution s =
        analytic_ik(ctx->config.robot, pose(R, p), RedundancyParams::make(js, je, jw, phi));
    put(s.q, q);
    if (degeneracy) *degeneracy = s.degeneracy;
  });
}

srsik_status srsik_extract_params(const srsik_context* ctx, const double q[7], int* js, int* je,
                                  int* jw, double* phi) {
  return guarded([&] {
    require(ctx && js && je && jw && phi, "null argument");
    const ExtractedParams e = extract_params(ctx->config.robot, joints(q));
    *js = e.params.js;
    *je = e.params.je;
    *jw = e.params.jw;
    *phi = e.params.phi;
  });
}

srsik_status srsik_dls(const srsik_context* ctx, const double R[9], const double p[3],
                       const double q_init[7], srsik_dls_result* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "null argument");
    const DlsResult r = dls_solve(ctx->config.robot, pose(R, p), joints(q_init), ctx->config.dls);
    put(r.q, out->q);
    out->iterations = r.iterations;
    out->converged = r.converged ? 1 : 0;
    out->error_norm = r.error_norm;
  });
}

// ---- selection -------------------------------------------------------

srsik_status srsik_select_exhaustive(const srsik_context* ctx, const double q0[7], const double R[9],
                                     const double p[3], srsik_selection* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "null argument");
    const SelectionConfig& s = ctx->config.selection;
    const SelectionResult r =
        exhaustive_select(ctx->config.robot, s.weights, joints(q0), pose(R, p), s.n_phi);
    put_selection(r, s.n_phi, s.n_b, out);
  });
}

srsik_status srsik_select_guided(const srsik_context* ctx, const double q0[7], const double R[9],
                                 const double p[3], int branch_class, int bin, srsik_selection* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "null argument");
    const SelectionConfig& s = ctx->config.selection;
    require(branch_class >= 0 && branch_class < kBranchCount, "branch class must lie in [0, 8)");
    require(bin >= 0 && bin < s.n_b, "bin must lie in [0, n_b)");
    const Prediction guess{BranchClass{branch_class}, bin};
    const SelectionResult r =
        guided_select(ctx->config.robot, s.weights, joints(q0), pose(R, p), guess, s.n_phi, s.n_b);
    put_selection(r, s.n_phi, s.n_b, out);
  });
}

srsik_status srsik_select_model(const srsik_context* ctx, const srsik_model* model, const double q0[7],
                                const double R[9], const double p[3], srsik_selection* out) {
  return guarded([&] {
    require(ctx != nullptr && model != nullptr && out != nullptr, "null argument");
    check_model(ctx->config, model->file);
    const JointVector q = joints(q0);
    const Pose x = pose(R, p);
    const Mlp& net = model->file.net;
    const PredictResult pred = net.predict(encode_features(q, x));
    const SelectionResult r = guided_select(ctx->config.robot, ctx->config.selection.weights, q, x,
                                            pred.prediction, model->file.n_phi, net.n_b());
    put_selection(r, model->file.n_phi, net.n_b(), out);
  });
}

srsik_status srsik_costmap(const srsik_context* ctx, const double q0[7], const double R[9],
                           const double p[3], const char* csv_path, srsik_selection* best) {
  return guarded([&] {
    require(ctx != nullptr && csv_path != nullptr, "null argument");
    const SelectionConfig& s = ctx->config.selection;
    CostMap map;
    const JointVector q = joints(q0);
    const Pose x = pose(R, p);
    SelectionResult r;
    bool found = true;
    try {
      r = exhaustive_select(ctx->config.robot, s.weights, q, x, s.n_phi, &map);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoFeasibleTarget) throw;
      found = false;
    }
    std::ofstream f = open_out(csv_path);
    write_costmap_csv(f, map);
    if (!f) throw Error(ErrorCode::kIo, std::string("write failed: ") + csv_path);
    if (!found) throw Error(ErrorCode::kNoFeasibleTarget, "cost map has no feasible cell");
    if (best) put_selection(r, s.n_phi, s.n_b, best);
  });
}

// ---- dataset ---------------------------------------------------------

srsik_status srsik_dataset_generate(const srsik_context* ctx, uint64_t count, uint64_t seed, int workers,
                                    const char* path, srsik_progress_fn progress, void* user,
                                    srsik_string** stats_json) {
  return guarded([&] {
    require(ctx != nullptr && path != nullptr, "null argument");
    ProgressFn fn;
    if (progress) fn = [&](std::uint64_t d, std::uint64_t t) { progress(d, t, user); };
    if (workers <= 0) workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    const GenerateStats st = generate_dataset(ctx->config.robot, ctx->config.selection, count, seed,
                                               workers, path, fn);
    if (stats_json) {
      const nlohmann::json j = {{"count", st.count},
                                {"discarded", st.discarded},
                                {"seconds", st.seconds},
                                {"micros_per_sample", st.micros_per_sample()},
                                {"class_histogram", st.class_histogram}};
      give(j.dump(2), stats_json);
    }
  });
}

srsik_status srsik_dataset_info(const char* path, srsik_string** json) {
  return guarded([&] {
    require(path != nullptr, "path is null");
    const DatasetHeader h = read_dataset_header(path);
    const nlohmann::json j = {{"version", h.version},   {"sample_count", h.sample_count},
                              {"n_b", h.n_b},           {"n_phi", h.n_phi},
                              {"omega_m", h.omega_m},   {"omega_c", h.omega_c},
                              {"geometry_hash", h.geometry_hash},
                              {"seed", h.seed},         {"header_hash", h.hash()}};
    give(j.dump(2), json);
  });
}

srsik_status srsik_dataset_export_csv(const char* path, const char* csv_path, uint64_t limit) {
  return guarded([&] {
    require(path != nullptr && csv_path != nullptr, "null argument");
    const Dataset d = read_dataset(path);
    std::ofstream f = open_out(csv_path);
    export_csv(f, d, limit == 0 ? UINT64_MAX : limit);
    if (!f) throw Error(ErrorCode::kIo, std::string("write failed: ") + csv_path);
  });
}

// ---- model -----------------------------------------------------------

srsik_status srsik_train(const srsik_context* ctx, const char* dataset_path, const char* model_path,
                         const char* metrics_csv, srsik_epoch_fn on_epoch, void* user,
                         srsik_string** summary_json) {
  return guarded([&] {
    require(ctx && dataset_path && model_path, "null argument");
    const TrainConfig& tc = ctx->config.training;
    const Dataset data = read_dataset(dataset_path);
    if (data.header.geometry_hash != ctx->config.robot.hash()) {
      throw Error(ErrorCode::kModelMismatch, "dataset was generated for a different robot geometry");
    }
    const Split split = split_indices(data.samples.size(), tc.seed);
    EpochFn fn;
    if (on_epoch) {
      fn = [&](const EpochMetrics& m) {
        const srsik_epoch e{m.epoch,           m.train_acc_class, m.train_acc_bin,
                            m.train_loss_class, m.train_loss_bin,  m.val_acc_class,
                            m.val_acc_bin,      m.val_loss_class,  m.val_loss_bin};
        on_epoch(&e, user);
      };
    }
    const ModelFile model = train(data, split, tc, fn);
    save_model(model_path, model);
    if (metrics_csv) {
      std::ofstream f = open_out(metrics_csv);
      write_metrics_csv(f, model.history);
      if (!f) throw Error(ErrorCode::kIo, std::string("write failed: ") + metrics_csv);
    }
    if (summary_json) {
      const nlohmann::json j = {{"train_samples", split.train.size()},
                                {"val_samples", split.val.size()},
                                {"test_samples", split.test.size()},
                                {"epochs", tc.epochs},
                                {"test", evaluation_json(evaluate(model.net, data, split.test))},
                                {"train", evaluation_json(evaluate(model.net, data, split.train))}};
      give(j.dump(2), summary_json);
    }
  });
}

srsik_status srsik_model_load(const char* path, srsik_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new srsik_model{load_model(path)};
  });
}

void srsik_model_destroy(srsik_model* model) { delete model; }

srsik_status srsik_model_info(const srsik_model* model, srsik_string** json) {
  return guarded([&] {
    require(model != nullptr, "model is null");
    const ModelFile& m = model->file;
    nlohmann::json j = {{"n_b", m.net.n_b()},
                        {"n_phi", m.n_phi},
                        {"dataset_hash", m.dataset_hash},
                        {"geometry_hash", m.geometry_hash},
                        {"omega_m", m.omega_m},
                        {"omega_c", m.omega_c},
                        {"epochs_trained", m.history.size()},
                        {"learning_rate", m.config.learning_rate},
                        {"batch_size", m.config.batch_size},
                        {"l2", m.config.l2},
                        {"seed", m.config.seed}};
    if (!m.history.empty()) {
      const EpochMetrics& e = m.history.back();
      j["final"] = {{"train_acc_class", e.train_acc_class}, {"train_acc_bin", e.train_acc_bin},
                    {"val_acc_class", e.val_acc_class},     {"val_acc_bin", e.val_acc_bin}};
    }
    give(j.dump(2), json);
  });
}

srsik_status srsik_model_evaluate(const srsik_model* model, const char* dataset_path, srsik_string** json) {
  return guarded([&] {
    require(model != nullptr && dataset_path != nullptr, "null argument");
    const Dataset data = read_dataset(dataset_path);
    if (data.header.hash() != model->file.dataset_hash) {
      throw Error(ErrorCode::kModelMismatch, "model was trained on a different dataset");
    }
    const Split split = split_indices(data.samples.size(), model->file.config.seed);
    give(evaluation_json(evaluate(model->file.net, data, split.test)).dump(2), json);
  });
}

srsik_status srsik_predict(const srsik_model* model, const double q0[7], const double R[9],
                           const double p[3], srsik_prediction* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    const PredictResult r = model->file.net.predict(encode_features(joints(q0), pose(R, p)));
    out->branch_class = r.prediction.branch.index;
    out->bin = r.prediction.bin;
    out->confidence_class = r.confidence_class;
    out->confidence_bin = r.confidence_bin;
  });
}

// ---- trajectory and experiments --------------------------------------

srsik_status srsik_plan(const srsik_context* ctx, const double q0[7], const double q_goal[7],
                        const char* csv_path, srsik_string** report_json) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    const TrajConfig& tc = ctx->config.trajopt;
    const TrajProblem p = TrajProblem::make(ctx->config.robot, joints(q0), joints(q_goal), tc);
    const Trajectory t = assemble_and_solve(p, tc.tol, tc.max_iters);
    if (csv_path) {
      std::ofstream f = open_out(csv_path);
      write_trajectory_csv(f, t);
      if (!f) throw Error(ErrorCode::kIo, std::string("write failed: ") + csv_path);
    }
    if (report_json) {
      nlohmann::json j = nlohmann::json::parse(trajectory_report_json(t));
      const TrajValidation v = validate_trajectory(p, t);
      j["validation"] = {{"max_defect", v.max_defect},
                         {"max_bound_violation", v.max_bound_violation},
                         {"max_boundary_error", v.max_boundary_error},
                         {"ok", v.ok(tc.tol)}};
      give(j.dump(2), report_json);
    }
  });
}

srsik_status srsik_montecarlo(const srsik_context* ctx, const srsik_model* model,
                              const srsik_montecarlo_options* options, const char* csv_path,
                              srsik_progress_fn progress, void* user, srsik_string** summary_json) {
  return guarded([&] {
    require(ctx != nullptr && options != nullptr, "null argument");
    MonteCarloOptions o;
    o.pairs = options->pairs;
    o.seed = options->seed;
    o.run_nn = options->run_nn != 0;
    o.run_dls = options->run_dls != 0;
    o.workers = options->workers;
    PairProgressFn fn;
    if (progress) {
      fn = [&](int d, int t) { progress(static_cast<uint64_t>(d), static_cast<uint64_t>(t), user); };
    }
    const MonteCarloResult r = run_monte_carlo(ctx->config, model ? &model->file : nullptr, o, fn);
    if (csv_path) {
      std::ofstream f = open_out(csv_path);
      write_outcomes_csv(f, r);
      if (!f) throw Error(ErrorCode::kIo, std::string("write failed: ") + csv_path);
    }
    if (summary_json) give(monte_carlo_summary_json(r), summary_json);
  });
}

srsik_status srsik_bench(const srsik_context* ctx, const srsik_model* model,
                         const srsik_bench_options* options, srsik_string** report_json) {
  return guarded([&] {
    require(ctx != nullptr, "context is null");
    BenchOptions o;
    if (options) {
      o.targets = options->targets;
      o.warmup = options->warmup;
      o.repetitions = options->repetitions;
      o.seed = options->seed;
    }
    const BenchReport r = run_bench(ctx->config, model ? &model->file : nullptr, o);
    give(bench_report_json(r), report_json);
  });
}

}  // extern "C"
