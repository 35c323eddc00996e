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
 * @file mlp.hpp
 * @brief Two-stage classifier for the branch class and the arm-angle bin.
 *
 * Stage 1 maps the 19 features through dense 32 (ReLU), dense 32 (ReLU) and
 * dense 8 (softmax) to class probabilities P. Stage 2 sees [features; P'] and
 * repeats the layout with an n_b-way softmax. During training P' = P, so
 * both stages are trained jointly by one optimizer; at inference P' is the
 * one-hot argmax of P.
 *
 * Tensor order (weights row-major, shape out x in; biases out x 1):
 *   0 s1.W0  1 s1.b0  2 s1.W1  3 s1.b1  4 s1.W2  5 s1.b2
 *   6 s2.W0  7 s2.b0  8 s2.W1  9 s2.b1 10 s2.W2 11 s2.b2
 */

#ifndef SRSIK_MLP_HPP_
#define SRSIK_MLP_HPP_

#include "srsik/dataset.hpp"
#include "srsik/selection.hpp"
#include "srsik/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace srsik {

inline constexpr int kHidden = 32;
inline constexpr int kTensorCount = 12;

struct TrainConfig {
  double learning_rate = 1e-3;
  double l2 = 1e-6;
  int batch_size = 2000;
  int epochs = 500;
  std::uint64_t seed = 1;
  bool reshuffle = true;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-7;

  void validate() const;
};

struct NetOutput {
  Eigen::VectorXd p_class;
  Eigen::VectorXd p_bin;
};

struct PredictResult {
  Prediction prediction;
  double confidence_class = 0.0;
  double confidence_bin = 0.0;
};

/// Labels of a mini-batch, one column of features per sample.
struct Batch {
  Eigen::MatrixXd x;  // kFeatureDim x B
  std::vector<int> y_class;
  std::vector<int> y_bin;
};

class Mlp {
 public:
  using Tensors = std::array<Eigen::MatrixXd, kTensorCount>;

  Mlp() = default;
  /// He-uniform weights, zero biases.
  static Mlp init(int n_b, std::uint64_t seed);

  [[nodiscard]] int n_b() const { return n_b_; }
  [[nodiscard]] const Tensors& tensors() const { return t_; }
  Tensors& tensors() { return t_; }
  [[nodiscard]] static std::array<const char*, kTensorCount> tensor_names();

  /// Inference-mode forward pass of one sample.
  [[nodiscard]] NetOutput forward(const Features& zeta) const;
  /// Argmax of each head (lowest index on ties).
  [[nodiscard]] PredictResult predict(const Features& zeta) const;

  /// Inference-mode forward pass of a batch; outputs are 8 x B and n_b x B.
  void forward_batch(const Eigen::MatrixXd& x, Eigen::MatrixXd& p_class, Eigen::MatrixXd& p_bin) const;

  struct Loss {
    double ce_class = 0.0;  // mean categorical cross-entropy
    double ce_bin = 0.0;
    double l2 = 0.0;        // l2 * (sum of squared weights)
    int correct_class = 0;  // training-mode argmax hits
    int correct_bin = 0;
    [[nodiscard]] double total() const { return ce_class + ce_bin + l2; }
  };

  /// Training-mode loss; fills `grad` (same shapes as the tensors) if given.
  Loss loss(const Batch& batch, double l2, Tensors* grad = nullptr) const;

 private:
  int n_b_ = 0;
  Tensors t_;
};

struct EpochMetrics {
  int epoch = 0;
  double train_acc_class = 0.0;
  double val_acc_class = 0.0;
  double train_loss_class = 0.0;
  double val_loss_class = 0.0;
  double train_acc_bin = 0.0;
  double val_acc_bin = 0.0;
  double train_loss_bin = 0.0;
  double val_loss_bin = 0.0;
};

struct Evaluation {
  double acc_class = 0.0;
  double acc_bin = 0.0;
  double loss_class = 0.0;
  double loss_bin = 0.0;
  /// Both heads right.
  double acc_joint = 0.0;
  std::uint64_t count = 0;
};

/// Inference-mode accuracy and cross-entropy over `indices` of `data`.
Evaluation evaluate(const Mlp& net, const Dataset& data, const std::vector<std::uint32_t>& indices);

struct ModelFile {
  Mlp net;
  TrainConfig config;
  int n_phi = 0;
  std::uint64_t dataset_hash = 0;
  std::uint64_t geometry_hash = 0;
  double omega_m = 0.0;
  double omega_c = 0.0;
  double split_train = 0.8;
  double split_val = 0.1;
  std::vector<EpochMetrics> history;
};

using EpochFn = std::function<void(const EpochMetrics&)>;

/// Adam on mean cross-entropy of both heads plus l2 * sum of squared weights
/// (biases excluded). Deterministic given the dataset and config.seed.
/// Throws Error(kTrainingDiverged) on a non-finite loss.
ModelFile train(const Dataset& data, const Split& split, const TrainConfig& config,
                const EpochFn& on_epoch = {});

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);
std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(std::string_view text);

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& history);

}  // namespace srsik

#endif  // SRSIK_MLP_HPP_
