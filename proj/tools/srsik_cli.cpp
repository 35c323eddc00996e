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

// srsik command-line front end. Talks to the library through srsik.h only.

#include "srsik/srsik.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Failure {
  srsik_status status;
  std::string message;
};

struct UsageError {
  std::string message;
};

void check(srsik_status s) {
  if (s != SRSIK_OK) throw Failure{s, srsik_last_error()};
}

json take(srsik_string* s) {
  std::unique_ptr<srsik_string, decltype(&srsik_string_destroy)> guard(s, srsik_string_destroy);
  return json::parse(std::string(srsik_string_data(s), srsik_string_size(s)));
}

using ContextPtr = std::unique_ptr<srsik_context, decltype(&srsik_context_destroy)>;
using ModelPtr = std::unique_ptr<srsik_model, decltype(&srsik_model_destroy)>;

ModelPtr load_model(const std::string& path) {
  srsik_model* m = nullptr;
  check(srsik_model_load(path.c_str(), &m));
  return {m, srsik_model_destroy};
}

// ---- shared options --------------------------------------------------

struct Common {
  std::string config;
  int n_phi = 0;
  int n_b = 0;
  double omega_m = 0.0;
  double omega_c = 0.0;
  bool quiet = false;
  std::string manifest;
};

struct TargetArgs {
  std::vector<double> q0;
  std::vector<double> from_q;
  std::vector<double> rotation;
  std::vector<double> position;
};

void add_target(CLI::App* app, TargetArgs& t, bool with_q0) {
  if (with_q0) app->add_option("--q0", t.q0, "Start configuration, 7 comma-separated radians")->delimiter(',')->required();
  app->add_option("--from-q", t.from_q, "Target pose as FK of this configuration")->delimiter(',');
  app->add_option("--R", t.rotation, "Target rotation, 9 comma-separated values, row-major")->delimiter(',');
  app->add_option("--p", t.position, "Target position, 3 comma-separated metres")->delimiter(',');
}

std::array<double, 7> joints(const std::vector<double>& v, const char* name) {
  if (v.size() != 7) throw UsageError{std::string(name) + " needs 7 values, got " + std::to_string(v.size())};
  std::array<double, 7> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

struct PoseArrays {
  std::array<double, 9> R{};
  std::array<double, 3> p{};
};

PoseArrays target_pose(const srsik_context* ctx, const TargetArgs& t) {
  PoseArrays x;
  if (!t.from_q.empty()) {
    if (!t.rotation.empty() || !t.position.empty()) throw UsageError{"give either --from-q or --R/--p"};
    const auto q = joints(t.from_q, "--from-q");
    check(srsik_fk(ctx, q.data(), x.R.data(), x.p.data()));
    return x;
  }
  if (t.rotation.size() != 9 || t.position.size() != 3) {
    throw UsageError{"target pose needs --from-q, or --R with 9 values and --p with 3"};
  }
  std::copy(t.rotation.begin(), t.rotation.end(), x.R.begin());
  std::copy(t.position.begin(), t.position.end(), x.p.begin());
  return x;
}

json pose_json(const PoseArrays& x) {
  return {{"R", {{x.R[0], x.R[1], x.R[2]}, {x.R[3], x.R[4], x.R[5]}, {x.R[6], x.R[7], x.R[8]}}},
          {"p", x.p}};
}

json selection_json(const srsik_selection& s) {
  return {{"q", std::vector<double>(s.q, s.q + 7)},
          {"params", {{"js", s.js}, {"je", s.je}, {"jw", s.jw}, {"phi", s.phi}}},
          {"branch_class", s.branch_class},
          {"phi_index", s.phi_index},
          {"bin", s.bin},
          {"cost", s.cost},
          {"evaluations", s.evaluations},
          {"feasible_count", s.feasible_count},
          {"fallback_level", s.fallback_level}};
}

ContextPtr make_context(const Common& c) {
  srsik_context* ctx = nullptr;
  check(srsik_context_create(c.config.empty() ? nullptr : c.config.c_str(), &ctx));
  ContextPtr p(ctx, srsik_context_destroy);
  check(srsik_context_set_grid(ctx, c.n_phi, c.n_b));
  check(srsik_context_set_weights(ctx, c.omega_m, c.omega_c));
  return p;
}

// ---- run manifest ----------------------------------------------------

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv)
      : command_(std::move(command)), started_(utc_now()), t0_(std::chrono::steady_clock::now()) {
    for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
  }

  void seed(const std::string& name, uint64_t value) { seeds_[name] = value; }
  void input(const std::string& path) { inputs_.push_back(path); }
  void output(const std::string& path) { outputs_.push_back(path); }

  // Written next to the first output unless an explicit path is given.
  void write(const srsik_context* ctx, const Common& common) const {
    if (outputs_.empty() && common.manifest.empty()) return;
    srsik_string* s = nullptr;
    check(srsik_context_config_json(ctx, &s));
    const std::string cfg_text = srsik_string_data(s);
    srsik_string_destroy(s);
    json files = json::array();
    for (const std::string& p : outputs_) files.push_back(file_entry(p));
    json ins = json::array();
    for (const std::string& p : inputs_) ins.push_back(file_entry(p));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    const json m = {
        {"command", command_},
        {"argv", argv_},
        {"config_path", common.config.empty() ? json(nullptr) : json(common.config)},
        {"config", json::parse(cfg_text)},
        {"seeds", seeds_},
        {"versions",
         {{"srsik", srsik_version()},
          {"cli11", CLI11_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__}}},
        {"wall_clock", {{"started_utc", started_}, {"seconds", seconds}}},
        {"inputs", ins},
        {"outputs", files}};
    const std::string path = common.manifest.empty() ? outputs_.front() + ".manifest.json" : common.manifest;
    std::ofstream f(path);
    if (!f) throw Failure{SRSIK_E_IO, "cannot write manifest " + path};
    f << m.dump(2) << '\n';
  }

 private:
  static json file_entry(const std::string& path) {
    uint64_t h = 0;
    check(srsik_file_hash(path.c_str(), &h));
    return {{"path", path}, {"bytes", fs::file_size(path)}, {"fnv1a64", hex64(h)}};
  }

  std::string command_;
  std::vector<std::string> argv_;
  std::string started_;
  std::chrono::steady_clock::time_point t0_;
  json seeds_ = json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

// Progress lines go to stderr so that stdout stays machine-readable.
struct Progress {
  const char* label;
  bool quiet;
  uint64_t last = 0;
};

void print_progress(uint64_t done, uint64_t total, void* user) {
  auto* p = static_cast<Progress*>(user);
  if (p->quiet || total == 0) return;
  const uint64_t pct = 100 * done / total;
  if (pct == p->last && done != total) return;
  p->last = pct;
  std::fprintf(stderr, "\r%s %llu/%llu (%llu%%)", p->label, static_cast<unsigned long long>(done),
               static_cast<unsigned long long>(total), static_cast<unsigned long long>(pct));
  if (done == total) std::fputc('\n', stderr);
}

struct EpochPrinter {
  bool quiet;
  int every;
  int total;
};

void print_epoch(const srsik_epoch* e, void* user) {
  const auto* p = static_cast<EpochPrinter*>(user);
  if (p->quiet || (e->epoch % p->every != 0 && e->epoch != p->total)) return;
  std::fprintf(stderr, "epoch %d  train %.4f/%.4f  val %.4f/%.4f  loss %.4f/%.4f\n", e->epoch,
               e->train_acc_class, e->train_acc_bin, e->val_acc_class, e->val_acc_bin,
               e->val_loss_class, e->val_loss_bin);
}

void print_bench_table(const json& rep) {
  std::fprintf(stderr, "%-26s %14s %8s %14s %10s\n", "entry", "ns/op", "ops", "published ns", "speedup");
  for (const json& e : rep.at("entries")) {
    const std::string name = e.at("name").get<std::string>();
    if (e.contains("reference_ns")) {
      std::fprintf(stderr, "%-26s %14.1f %8lld %14.1f %9.2fx\n", name.c_str(), e.at("ns_per_op").get<double>(),
                   e.at("ops").get<long long>(), e.at("reference_ns").get<double>(),
                   e.at("speedup_vs_reference").get<double>());
    } else {
      std::fprintf(stderr, "%-26s %14.1f %8lld %14s %10s\n", name.c_str(), e.at("ns_per_op").get<double>(),
                   e.at("ops").get<long long>(), "-", "-");
    }
  }
  const json& r = rep.at("ratios");
  std::fprintf(stderr, "DLS / guided: %.2fx here, %.2fx published\n", r.at("dls_over_guided").get<double>(),
               r.at("reference_dls_over_guided").get<double>());
  std::fprintf(stderr, "det / analytic manipulability: %.2fx\n",
               r.at("det_over_analytic_manipulability").get<double>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Redundancy-resolved analytical IK for S-R-S arms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(srsik_version()));

  Common common;
  app.add_option("--config", common.config, "Run configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--n-phi", common.n_phi, "Override the arm-angle grid size");
  app.add_option("--n-b", common.n_b, "Override the bin count");
  app.add_option("--omega-m", common.omega_m, "Override the manipulability weight");
  app.add_option("--omega-c", common.omega_c, "Override the closeness weight");
  app.add_flag("--quiet", common.quiet, "No progress on stderr");
  app.add_option("--manifest", common.manifest, "Run manifest path (default: <first output>.manifest.json)");

  // fk
  std::vector<double> fk_q;
  CLI::App* fk = app.add_subcommand("fk", "Forward kinematics of a configuration");
  fk->add_option("--q", fk_q, "Configuration, 7 comma-separated radians")->delimiter(',')->required();

  // ik
  TargetArgs ik_t;
  std::vector<double> ik_params, ik_init;
  std::string ik_method = "analytic";
  CLI::App* ik = app.add_subcommand("ik", "Inverse kinematics of a pose");
  add_target(ik, ik_t, false);
  ik->add_option("--params", ik_params, "js,je,jw,phi (default: extracted from --from-q)")->delimiter(',');
  ik->add_option("--method", ik_method, "analytic or dls")->check(CLI::IsMember({"analytic", "dls"}));
  ik->add_option("--q-init", ik_init, "DLS start configuration")->delimiter(',');

  // select
  TargetArgs sel_t;
  bool sel_exhaustive = false;
  std::string sel_model;
  int sel_class = -1, sel_bin = -1;
  CLI::App* sel = app.add_subcommand("select", "Choose the target configuration for a pose");
  add_target(sel, sel_t, true);
  sel->add_flag("--exhaustive", sel_exhaustive, "Search all 8 x n_phi cells");
  sel->add_option("--model", sel_model, "Guide the search with a trained model");
  sel->add_option("--class", sel_class, "Guide with an explicit branch class");
  sel->add_option("--bin", sel_bin, "Guide with an explicit bin (with --class)");

  // costmap
  TargetArgs cm_t;
  std::string cm_out;
  CLI::App* cm = app.add_subcommand("costmap", "Write the 8 x n_phi cost grid as CSV");
  add_target(cm, cm_t, true);
  cm->add_option("--out", cm_out, "CSV path")->required();

  // gen-dataset
  uint64_t gd_count = 0, gd_seed = 1;
  int gd_workers = 0;
  std::string gd_out, gd_csv;
  uint64_t gd_csv_limit = 0;
  CLI::App* gd = app.add_subcommand("gen-dataset", "Generate a labelled dataset");
  gd->add_option("--count", gd_count, "Number of samples")->required();
  gd->add_option("--seed", gd_seed, "Sampling seed");
  gd->add_option("--workers", gd_workers, "Worker threads (0: all cores)");
  gd->add_option("--out", gd_out, "Binary dataset path")->required();
  gd->add_option("--csv", gd_csv, "Also export rows as CSV");
  gd->add_option("--csv-limit", gd_csv_limit, "Rows to export (0: all)");

  // train
  std::string tr_data, tr_out, tr_metrics;
  int tr_epochs = 0, tr_batch = 0, tr_every = 10;
  double tr_lr = 0.0, tr_l2 = 0.0;
  uint64_t tr_seed = 0;
  CLI::App* tr = app.add_subcommand("train", "Train the predictor");
  tr->add_option("--dataset", tr_data, "Dataset path")->required()->check(CLI::ExistingFile);
  tr->add_option("--out", tr_out, "Model JSON path")->required();
  tr->add_option("--metrics", tr_metrics, "Per-epoch metrics CSV");
  tr->add_option("--epochs", tr_epochs, "Override epochs");
  tr->add_option("--batch", tr_batch, "Override batch size");
  tr->add_option("--lr", tr_lr, "Override learning rate");
  tr->add_option("--l2", tr_l2, "Override L2 weight (positive)");
  tr->add_option("--seed", tr_seed, "Override initialisation, shuffle and split seed");
  tr->add_option("--log-every", tr_every, "Epochs between progress lines")->check(CLI::PositiveNumber);

  // predict
  TargetArgs pr_t;
  std::string pr_model, pr_data;
  CLI::App* pr = app.add_subcommand("predict", "Predict (class, bin) or evaluate on a dataset");
  pr->add_option("--model", pr_model, "Model JSON path")->required();
  pr->add_option("--q0", pr_t.q0, "Start configuration")->delimiter(',');
  pr->add_option("--from-q", pr_t.from_q, "Target pose as FK of this configuration")->delimiter(',');
  pr->add_option("--R", pr_t.rotation, "Target rotation, row-major")->delimiter(',');
  pr->add_option("--p", pr_t.position, "Target position")->delimiter(',');
  pr->add_option("--dataset", pr_data, "Evaluate on the test split of this dataset");

  // plan
  std::vector<double> pl_q0, pl_qf;
  std::string pl_out;
  CLI::App* pl = app.add_subcommand("plan", "Point-to-point trajectory between two configurations");
  pl->add_option("--q0", pl_q0, "Start configuration")->delimiter(',')->required();
  pl->add_option("--qf", pl_qf, "Goal configuration")->delimiter(',')->required();
  pl->add_option("--out", pl_out, "Trajectory CSV path");

  // montecarlo
  int mc_pairs = 1000, mc_workers = 0;
  uint64_t mc_seed = 7;
  std::string mc_mode = "both", mc_model, mc_csv, mc_json;
  CLI::App* mc = app.add_subcommand("montecarlo", "Compare learned and DLS target resolution");
  mc->add_option("--pairs", mc_pairs, "Random (q0, target) pairs")->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_seed, "Pair seed");
  mc->add_option("--mode", mc_mode, "nn, dls or both")->check(CLI::IsMember({"nn", "dls", "both"}));
  mc->add_option("--model", mc_model, "Model JSON path (nn and both)");
  mc->add_option("--workers", mc_workers, "Worker threads (0: all cores)");
  mc->add_option("--csv", mc_csv, "Per-pair CSV path");
  mc->add_option("--out", mc_json, "Summary JSON path");

  // bench
  int bn_targets = 1000, bn_warmup = 200, bn_reps = 5;
  uint64_t bn_seed = 11;
  std::string bn_model, bn_out;
  CLI::App* bn = app.add_subcommand("bench", "Microbenchmarks");
  bn->add_option("--targets", bn_targets, "Random targets")->check(CLI::PositiveNumber);
  bn->add_option("--warmup", bn_warmup, "Untimed calls per entry");
  bn->add_option("--reps", bn_reps, "Timed passes per entry (median kept)")->check(CLI::PositiveNumber);
  bn->add_option("--seed", bn_seed, "Target seed");
  bn->add_option("--model", bn_model, "Trained model (default: random weights)");
  bn->add_option("--out", bn_out, "Report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Manifest manifest(cmd->get_name(), argc, argv);

  try {
    ContextPtr ctx = make_context(common);
    const srsik_context* c = ctx.get();
    if (!common.config.empty()) manifest.input(common.config);

    if (cmd == fk) {
      const auto q = joints(fk_q, "--q");
      PoseArrays x;
      check(srsik_fk(c, q.data(), x.R.data(), x.p.data()));
      double ma = 0.0, md = 0.0;
      check(srsik_manipulability(c, q.data(), &ma, &md));
      int js, je, jw;
      double phi;
      check(srsik_extract_params(c, q.data(), &js, &je, &jw, &phi));
      json out = pose_json(x);
      out["q"] = q;
      out["params"] = {{"js", js}, {"je", je}, {"jw", jw}, {"phi", phi}};
      out["manipulability"] = {{"analytic", ma}, {"det", md}};
      emit(out);
    } else if (cmd == ik) {
      const PoseArrays x = target_pose(c, ik_t);
      json out = {{"pose", pose_json(x)}, {"method", ik_method}};
      if (ik_method == "dls") {
        if (ik_init.empty() && ik_t.from_q.empty()) throw UsageError{"dls needs --q-init"};
        const auto init = ik_init.empty() ? std::array<double, 7>{} : joints(ik_init, "--q-init");
        srsik_dls_result r{};
        check(srsik_dls(c, x.R.data(), x.p.data(), init.data(), &r));
        out["q"] = std::vector<double>(r.q, r.q + 7);
        out["iterations"] = r.iterations;
        out["converged"] = r.converged != 0;
        out["error_norm"] = r.error_norm;
      } else {
        int js, je, jw;
        double phi;
        if (!ik_params.empty()) {
          if (ik_params.size() != 4) throw UsageError{"--params needs js,je,jw,phi"};
          js = static_cast<int>(ik_params[0]);
          je = static_cast<int>(ik_params[1]);
          jw = static_cast<int>(ik_params[2]);
          phi = ik_params[3];
        } else if (!ik_t.from_q.empty()) {
          const auto q = joints(ik_t.from_q, "--from-q");
          check(srsik_extract_params(c, q.data(), &js, &je, &jw, &phi));
        } else {
          throw UsageError{"analytic ik needs --params (or --from-q to extract them)"};
        }
        std::array<double, 7> q{};
        unsigned degeneracy = 0;
        check(srsik_ik(c, x.R.data(), x.p.data(), js, je, jw, phi, q.data(), &degeneracy));
        out["q"] = q;
        out["params"] = {{"js", js}, {"je", je}, {"jw", jw}, {"phi", phi}};
        out["degeneracy"] = degeneracy;
      }
      emit(out);
    } else if (cmd == sel) {
      const auto q0 = joints(sel_t.q0, "--q0");
      const PoseArrays x = target_pose(c, sel_t);
      const int modes = int(sel_exhaustive) + int(!sel_model.empty()) + int(sel_class >= 0);
      if (modes != 1) throw UsageError{"choose one of --exhaustive, --model or --class/--bin"};
      srsik_selection r{};
      std::string mode;
      if (sel_exhaustive) {
        mode = "exhaustive";
        check(srsik_select_exhaustive(c, q0.data(), x.R.data(), x.p.data(), &r));
      } else if (!sel_model.empty()) {
        mode = "model";
        const ModelPtr m = load_model(sel_model);
        check(srsik_select_model(c, m.get(), q0.data(), x.R.data(), x.p.data(), &r));
      } else {
        if (sel_bin < 0) throw UsageError{"--class needs --bin"};
        mode = "guided";
        check(srsik_select_guided(c, q0.data(), x.R.data(), x.p.data(), sel_class, sel_bin, &r));
      }
      json out = selection_json(r);
      out["mode"] = mode;
      emit(out);
    } else if (cmd == cm) {
      const auto q0 = joints(cm_t.q0, "--q0");
      const PoseArrays x = target_pose(c, cm_t);
      srsik_selection best{};
      const srsik_status s = srsik_costmap(c, q0.data(), x.R.data(), x.p.data(), cm_out.c_str(), &best);
      if (s != SRSIK_OK && s != SRSIK_E_NO_FEASIBLE_TARGET) check(s);
      manifest.output(cm_out);
      manifest.write(c, common);
      check(s);
      json out = {{"csv", cm_out}, {"best", selection_json(best)}};
      emit(out);
    } else if (cmd == gd) {
      Progress prog{"samples", common.quiet};
      srsik_string* stats = nullptr;
      check(srsik_dataset_generate(c, gd_count, gd_seed, gd_workers, gd_out.c_str(), print_progress, &prog,
                                   &stats));
      json out = take(stats);
      manifest.seed("dataset", gd_seed);
      manifest.output(gd_out);
      if (!gd_csv.empty()) {
        check(srsik_dataset_export_csv(gd_out.c_str(), gd_csv.c_str(), gd_csv_limit));
        manifest.output(gd_csv);
      }
      srsik_string* info = nullptr;
      check(srsik_dataset_info(gd_out.c_str(), &info));
      out["header"] = take(info);
      out["path"] = gd_out;
      manifest.write(c, common);
      emit(out);
    } else if (cmd == tr) {
      check(srsik_context_set_training(ctx.get(), tr_epochs, tr_batch, tr_lr, tr_l2, tr_seed));
      json cfg;
      {
        srsik_string* s = nullptr;
        check(srsik_context_config_json(c, &s));
        cfg = take(s);
      }
      const json& t = cfg.at("training");
      EpochPrinter printer{common.quiet, tr_every, t.at("epochs").get<int>()};
      srsik_string* summary = nullptr;
      check(srsik_train(c, tr_data.c_str(), tr_out.c_str(), tr_metrics.empty() ? nullptr : tr_metrics.c_str(),
                        print_epoch, &printer, &summary));
      json out = take(summary);
      out["model"] = tr_out;
      manifest.seed("training", t.at("seed").get<uint64_t>());
      manifest.input(tr_data);
      manifest.output(tr_out);
      if (!tr_metrics.empty()) manifest.output(tr_metrics);
      manifest.write(c, common);
      emit(out);
    } else if (cmd == pr) {
      const ModelPtr m = load_model(pr_model);
      if (!pr_data.empty()) {
        srsik_string* s = nullptr;
        check(srsik_model_evaluate(m.get(), pr_data.c_str(), &s));
        json out = take(s);
        out["dataset"] = pr_data;
        emit(out);
      } else {
        const auto q0 = joints(pr_t.q0, "--q0");
        const PoseArrays x = target_pose(c, pr_t);
        srsik_prediction p{};
        check(srsik_predict(m.get(), q0.data(), x.R.data(), x.p.data(), &p));
        emit({{"branch_class", p.branch_class},
              {"bin", p.bin},
              {"confidence_class", p.confidence_class},
              {"confidence_bin", p.confidence_bin}});
      }
    } else if (cmd == pl) {
      const auto q0 = joints(pl_q0, "--q0");
      const auto qf = joints(pl_qf, "--qf");
      srsik_string* s = nullptr;
      check(srsik_plan(c, q0.data(), qf.data(), pl_out.empty() ? nullptr : pl_out.c_str(), &s));
      json out = take(s);
      if (!pl_out.empty()) {
        manifest.output(pl_out);
        manifest.write(c, common);
      }
      emit(out);
    } else if (cmd == mc) {
      const bool nn = mc_mode != "dls";
      ModelPtr m(nullptr, srsik_model_destroy);
      if (nn) {
        if (mc_model.empty()) throw UsageError{"--mode " + mc_mode + " needs --model"};
        m = load_model(mc_model);
        manifest.input(mc_model);
      }
      const srsik_montecarlo_options o{mc_pairs, mc_seed, nn ? 1 : 0, mc_mode != "nn" ? 1 : 0, mc_workers};
      Progress prog{"pairs", common.quiet};
      srsik_string* s = nullptr;
      check(srsik_montecarlo(c, m.get(), &o, mc_csv.empty() ? nullptr : mc_csv.c_str(), print_progress, &prog,
                             &s));
      const json out = take(s);
      if (!mc_json.empty()) {
        std::ofstream f(mc_json);
        if (!f) throw Failure{SRSIK_E_IO, "cannot write " + mc_json};
        f << out.dump(2) << '\n';
        f.close();
        manifest.output(mc_json);
      }
      if (!mc_csv.empty()) manifest.output(mc_csv);
      manifest.seed("pairs", mc_seed);
      manifest.write(c, common);
      emit(out);
    } else if (cmd == bn) {
      ModelPtr m(nullptr, srsik_model_destroy);
      if (!bn_model.empty()) m = load_model(bn_model);
      const srsik_bench_options o{bn_targets, bn_warmup, bn_reps, bn_seed};
      srsik_string* s = nullptr;
      check(srsik_bench(c, m.get(), &o, &s));
      const json out = take(s);
      if (!common.quiet) print_bench_table(out);
      if (!bn_out.empty()) {
        std::ofstream f(bn_out);
        if (!f) throw Failure{SRSIK_E_IO, "cannot write " + bn_out};
        f << out.dump(2) << '\n';
        f.close();
        manifest.output(bn_out);
        manifest.seed("targets", bn_seed);
        manifest.write(c, common);
      }
      emit(out);
    }
  } catch (const UsageError& e) {
    std::cerr << cmd->get_name() << ": " << e.message << '\n';
    emit({{"error", {{"status", "usage"}, {"code", kExitUsage}, {"message", e.message}}}});
    return kExitUsage;
  } catch (const Failure& f) {
    emit({{"error", {{"status", srsik_status_name(f.status)}, {"code", static_cast<int>(f.status)},
                     {"message", f.message}}}});
    return f.status == SRSIK_E_INVALID_ARGUMENT ? kExitUsage : kExitDomain;
  }
  return kExitOk;
}
