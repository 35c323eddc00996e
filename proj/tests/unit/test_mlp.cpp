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

#include "srsik/mlp.hpp"

#include "srsik/kinematics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace srsik;

namespace {

const RobotGeometry kGeom = RobotGeometry::iiwa14();

Batch random_batch(int n, int n_b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> uc(0, kBranchCount - 1), ub(0, n_b - 1);
  Batch b;
  b.x.resize(kFeatureDim, n);
  for (int k = 0; k < n; ++k) {
    const JointVector q0 = test::random_q(kGeom, rng);
    b.x.col(k) = encode_features(q0, forward_kinematics(kGeom, test::random_q(kGeom, rng)));
    b.y_class.push_back(uc(rng));
    b.y_bin.push_back(ub(rng));
  }
  return b;
}

}  // namespace

TEST_CASE("outputs are probability vectors") {
  const Mlp net = Mlp::init(8, 3);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Features z = encode_features(test::random_q(kGeom, rng), forward_kinematics(kGeom, test::random_q(kGeom, rng)));
    const NetOutput o = net.forward(z);
    CHECK(std::abs(o.p_class.sum() - 1.0) < 1e-9);
    CHECK(std::abs(o.p_bin.sum() - 1.0) < 1e-9);
    CHECK(o.p_class.minCoeff() >= 0.0);
    CHECK(o.p_bin.minCoeff() >= 0.0);
  }
}

TEST_CASE("zero output layers give uniform distributions and lowest-index ties") {
  Mlp net = Mlp::init(5, 3);
  net.tensors()[4].setZero();
  net.tensors()[5].setZero();
  net.tensors()[10].setZero();
  net.tensors()[11].setZero();
  const NetOutput o = net.forward(Features::Constant(0.2));
  CHECK((o.p_class.array() - 1.0 / 8).abs().maxCoeff() < 1e-15);
  CHECK((o.p_bin.array() - 1.0 / 5).abs().maxCoeff() < 1e-15);
  const PredictResult p = net.predict(Features::Constant(0.2));
  CHECK(p.prediction.branch.index == 0);
  CHECK(p.prediction.bin == 0);
}

TEST_CASE("gradients match central differences") {
  const int n_b = 6;
  Mlp net = Mlp::init(n_b, 11);
  // Nonzero biases so every tensor is exercised away from its init value.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01(0.0, 0.1);
  for (int i = 1; i < kTensorCount; i += 2) {
    for (Eigen::Index r = 0; r < net.tensors()[i].rows(); ++r) net.tensors()[i](r, 0) = n01(rng);
  }
  const Batch batch = random_batch(16, n_b, 5);
  const double l2 = 1e-3;
  Mlp::Tensors grad;
  net.loss(batch, l2, &grad);
  const double h = 1e-4;
  double worst = 0.0;
  int checked = 0;
  for (int i = 0; i < kTensorCount; ++i) {
    Eigen::MatrixXd& t = net.tensors()[i];
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        const double keep = t(r, c);
        auto central = [&](double step) {
          t(r, c) = keep + step;
          const double up = net.loss(batch, l2).total();
          t(r, c) = keep - step;
          const double down = net.loss(batch, l2).total();
          t(r, c) = keep;
          return (up - down) / (2 * step);
        };
        // Richardson-extrapolated central difference, O(h^4).
        const double numeric = (4 * central(h / 2) - central(h)) / 3;
        const double analytic = grad[i](r, c);
        const double rel = std::abs(numeric - analytic) / std::max({std::abs(numeric), std::abs(analytic), 1e-5});
        worst = std::max(worst, rel);
        ++checked;
      }
    }
  }
  MESSAGE("checked " << checked << " parameters, worst relative error " << worst);
  CHECK(worst < 1e-5);
}

TEST_CASE("batch inference equals single predictions and survives save/load") {
  const Mlp net = Mlp::init(8, 4);
  const Batch b = random_batch(1000, 8, 6);
  Eigen::MatrixXd pc, pb;
  net.forward_batch(b.x, pc, pb);
  ModelFile m;
  m.net = net;
  m.n_phi = 100;
  m.dataset_hash = 0xfeedfacecafebeefULL;
  m.history.push_back(EpochMetrics{1, 0.5, 0.4, 1.0, 1.1, 0.3, 0.2, 2.0, 2.1});
  const auto path = std::filesystem::temp_directory_path() / "srsik_test_model.json";
  save_model(path, m);
  const ModelFile loaded = load_model(path);
  CHECK(loaded.dataset_hash == m.dataset_hash);
  CHECK(loaded.history.size() == 1);
  CHECK(loaded.history[0].val_loss_bin == 2.1);
  for (int k = 0; k < 1000; ++k) {
    const Features z = b.x.col(k);
    const PredictResult p = net.predict(z);
    const NetOutput o = net.forward(z);
    CHECK((o.p_class - pc.col(k)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((o.p_bin - pb.col(k)).cwiseAbs().maxCoeff() < 1e-15);
    const PredictResult q = loaded.net.predict(z);
    CHECK(q.prediction.branch.index == p.prediction.branch.index);
    CHECK(q.prediction.bin == p.prediction.bin);
    CHECK(q.confidence_bin == p.confidence_bin);
  }
  for (int i = 0; i < kTensorCount; ++i) CHECK(loaded.net.tensors()[i] == net.tensors()[i]);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(model_from_json("{\"format\":\"other\"}"), Error);
}

TEST_CASE("small labeled set is memorized and training is deterministic") {
  const Dataset d = generate_samples(kGeom, SelectionConfig{}, 1000, 17, 1);
  Split all;
  for (std::uint32_t i = 0; i < 1000; ++i) all.train.push_back(i);
  all.val = {0, 1, 2, 3};
  TrainConfig cfg;
  cfg.batch_size = 50;
  cfg.epochs = 500;
  cfg.learning_rate = 3e-3;
  cfg.seed = 3;
  std::vector<double> first_losses;
  const ModelFile m = train(d, all, cfg, [&](const EpochMetrics& e) {
    if (e.epoch <= 10) first_losses.push_back(e.train_loss_class + e.train_loss_bin);
  });
  const Evaluation e = evaluate(m.net, d, all.train);
  MESSAGE("memorization: class " << e.acc_class << ", bin " << e.acc_bin);
  CHECK(e.acc_class >= 0.99);
  CHECK(e.acc_bin >= 0.99);
  int increases = 0;
  for (std::size_t i = 1; i < first_losses.size(); ++i) increases += first_losses[i] > first_losses[i - 1];
  CHECK(increases <= 1);

  TrainConfig short_cfg = cfg;
  short_cfg.epochs = 3;
  const ModelFile a = train(d, all, short_cfg);
  const ModelFile b = train(d, all, short_cfg);
  for (int i = 0; i < kTensorCount; ++i) CHECK(a.net.tensors()[i] == b.net.tensors()[i]);
  std::ostringstream csv;
  write_metrics_csv(csv, a.history);
  const std::string rows = csv.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 4);
}
