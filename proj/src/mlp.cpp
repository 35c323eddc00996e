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

#include "base64.hpp"
#include "binary_io.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>

namespace srsik {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kStage2In = kFeatureDim + kBranchCount;
constexpr std::uint64_t kShuffleStream = 0x5348'5546'464c'4500ULL;
constexpr std::uint64_t kInitStream = 0x494e'4954'0000'0000ULL;
constexpr int kEvalChunk = 4096;

inline int w_index(int stage, int layer) { return 6 * stage + 2 * layer; }

void softmax_cols(const MatrixXd& z, MatrixXd& p) {
  p.resize(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    p.col(c) = (z.col(c).array() - m).exp();
    p.col(c) /= p.col(c).sum();
  }
}

// -log softmax(z)[y] per column, summed.
double cross_entropy_sum(const MatrixXd& z, const std::vector<int>& y) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    const double lse = m + std::log((z.col(c).array() - m).exp().sum());
    s += lse - z(y[static_cast<std::size_t>(c)], c);
  }
  return s;
}

int argmax(const Eigen::Ref<const VectorXd>& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

void dense(const MatrixXd& W, const MatrixXd& b, const MatrixXd& x, MatrixXd& out) {
  out.noalias() = W * x;
  out.colwise() += b.col(0);
}

struct Forward {
  MatrixXd a1, h1, a2, h2, z, p;      // stage 1
  MatrixXd u, c1, g1, c2, g2, zb, q;  // stage 2
};

// Runs both stages; `one_hot` selects the inference-mode stage-2 input.
void run_forward(const Mlp::Tensors& t, const MatrixXd& x, bool one_hot, Forward& f) {
  dense(t[0], t[1], x, f.a1);
  f.h1 = f.a1.cwiseMax(0.0);
  dense(t[2], t[3], f.h1, f.a2);
  f.h2 = f.a2.cwiseMax(0.0);
  dense(t[4], t[5], f.h2, f.z);
  softmax_cols(f.z, f.p);

  f.u.resize(kStage2In, x.cols());
  f.u.topRows(kFeatureDim) = x;
  if (one_hot) {
    f.u.bottomRows(kBranchCount).setZero();
    for (Eigen::Index c = 0; c < x.cols(); ++c) f.u(kFeatureDim + argmax(f.p.col(c)), c) = 1.0;
  } else {
    f.u.bottomRows(kBranchCount) = f.p;
  }
  dense(t[6], t[7], f.u, f.c1);
  f.g1 = f.c1.cwiseMax(0.0);
  dense(t[8], t[9], f.g1, f.c2);
  f.g2 = f.c2.cwiseMax(0.0);
  dense(t[10], t[11], f.g2, f.zb);
  softmax_cols(f.zb, f.q);
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::kParse, std::string("model: missing field '") + key + "'");
  }
  return std::stoull(j.at(key).get<std::string>(), nullptr, 16);
}

std::array<std::pair<int, int>, kTensorCount> tensor_shapes(int n_b) {
  return {{{kHidden, kFeatureDim}, {kHidden, 1}, {kHidden, kHidden}, {kHidden, 1},
           {kBranchCount, kHidden}, {kBranchCount, 1},
           {kHidden, kStage2In}, {kHidden, 1}, {kHidden, kHidden}, {kHidden, 1},
           {n_b, kHidden}, {n_b, 1}}};
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !(l2 >= 0.0) || batch_size < 1 || epochs < 1 || !(beta1 >= 0.0 && beta1 < 1.0) ||
      !(beta2 >= 0.0 && beta2 < 1.0) || !(adam_eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid training configuration");
  }
}

std::array<const char*, kTensorCount> Mlp::tensor_names() {
  return {"s1.W0", "s1.b0", "s1.W1", "s1.b1", "s1.W2", "s1.b2",
          "s2.W0", "s2.b0", "s2.W1", "s2.b1", "s2.W2", "s2.b2"};
}

Mlp Mlp::init(int n_b, std::uint64_t seed) {
  if (n_b < 1) throw Error(ErrorCode::kInvalidArgument, "n_b must be >= 1");
  Mlp net;
  net.n_b_ = n_b;
  SampleRng rng(seed, kInitStream);
  const auto shapes = tensor_shapes(n_b);
  for (int i = 0; i < kTensorCount; ++i) {
    MatrixXd& m = net.t_[i];
    m.setZero(shapes[i].first, shapes[i].second);
    if (i % 2 == 1) continue;
    const double limit = std::sqrt(6.0 / static_cast<double>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-limit, limit);
    }
  }
  return net;
}

NetOutput Mlp::forward(const Features& zeta) const {
  Forward f;
  run_forward(t_, MatrixXd(zeta), true, f);
  return NetOutput{f.p.col(0), f.q.col(0)};
}

PredictResult Mlp::predict(const Features& zeta) const {
  const NetOutput o = forward(zeta);
  PredictResult r;
  const int c = argmax(o.p_class);
  const int b = argmax(o.p_bin);
  r.prediction = Prediction{BranchClass{c}, b};
  r.confidence_class = o.p_class[c];
  r.confidence_bin = o.p_bin[b];
  return r;
}

void Mlp::forward_batch(const MatrixXd& x, MatrixXd& p_class, MatrixXd& p_bin) const {
  Forward f;
  run_forward(t_, x, true, f);
  p_class = std::move(f.p);
  p_bin = std::move(f.q);
}

Mlp::Loss Mlp::loss(const Batch& batch, double l2, Tensors* grad) const {
  const auto B = batch.x.cols();
  Forward f;
  run_forward(t_, batch.x, false, f);
  Loss L;
  L.ce_class = cross_entropy_sum(f.z, batch.y_class) / static_cast<double>(B);
  L.ce_bin = cross_entropy_sum(f.zb, batch.y_bin) / static_cast<double>(B);
  for (int s = 0; s < 2; ++s) {
    for (int l = 0; l < 3; ++l) L.l2 += l2 * t_[w_index(s, l)].squaredNorm();
  }
  for (Eigen::Index c = 0; c < B; ++c) {
    L.correct_class += argmax(f.p.col(c)) == batch.y_class[c];
    L.correct_bin += argmax(f.q.col(c)) == batch.y_bin[c];
  }
  if (grad == nullptr) return L;

  Tensors& g = *grad;
  const double inv_b = 1.0 / static_cast<double>(B);
  MatrixXd dzb = f.q;
  for (Eigen::Index c = 0; c < B; ++c) dzb(batch.y_bin[c], c) -= 1.0;
  dzb *= inv_b;
  g[10].noalias() = dzb * f.g2.transpose();
  g[11] = dzb.rowwise().sum();
  MatrixXd d = (t_[10].transpose() * dzb).cwiseProduct((f.c2.array() > 0.0).cast<double>().matrix());
  g[8].noalias() = d * f.g1.transpose();
  g[9] = d.rowwise().sum();
  d = (t_[8].transpose() * d).cwiseProduct((f.c1.array() > 0.0).cast<double>().matrix());
  g[6].noalias() = d * f.u.transpose();
  g[7] = d.rowwise().sum();
  const MatrixXd dp = (t_[6].transpose() * d).bottomRows(kBranchCount);

  // Class head: cross-entropy term plus the softmax Jacobian applied to the
  // gradient arriving through the stage-2 input.
  MatrixXd dz = f.p;
  for (Eigen::Index c = 0; c < B; ++c) dz(batch.y_class[c], c) -= 1.0;
  dz *= inv_b;
  const Eigen::RowVectorXd pd = f.p.cwiseProduct(dp).colwise().sum();
  dz += f.p.cwiseProduct(dp - Eigen::VectorXd::Ones(kBranchCount) * pd);
  g[4].noalias() = dz * f.h2.transpose();
  g[5] = dz.rowwise().sum();
  d = (t_[4].transpose() * dz).cwiseProduct((f.a2.array() > 0.0).cast<double>().matrix());
  g[2].noalias() = d * f.h1.transpose();
  g[3] = d.rowwise().sum();
  d = (t_[2].transpose() * d).cwiseProduct((f.a1.array() > 0.0).cast<double>().matrix());
  g[0].noalias() = d * batch.x.transpose();
  g[1] = d.rowwise().sum();

  for (int s = 0; s < 2; ++s) {
    for (int l = 0; l < 3; ++l) g[w_index(s, l)] += (2.0 * l2) * t_[w_index(s, l)];
  }
  return L;
}

Evaluation evaluate(const Mlp& net, const Dataset& data, const std::vector<std::uint32_t>& indices) {
  Evaluation e;
  e.count = indices.size();
  if (indices.empty()) return e;
  Forward f;
  MatrixXd x;
  std::vector<int> yc, yb;
  double ce_c = 0.0, ce_b = 0.0;
  std::uint64_t ok_c = 0, ok_b = 0, ok_j = 0;
  for (std::size_t first = 0; first < indices.size(); first += kEvalChunk) {
    const std::size_t n = std::min<std::size_t>(kEvalChunk, indices.size() - first);
    x.resize(kFeatureDim, static_cast<Eigen::Index>(n));
    yc.resize(n);
    yb.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Sample& s = data.samples[indices[first + k]];
      for (int r = 0; r < kFeatureDim; ++r) x(r, static_cast<Eigen::Index>(k)) = s.zeta[r];
      yc[k] = s.label_class;
      yb[k] = s.label_bin;
    }
    run_forward(net.tensors(), x, true, f);
    ce_c += cross_entropy_sum(f.z, yc);
    ce_b += cross_entropy_sum(f.zb, yb);
    for (std::size_t k = 0; k < n; ++k) {
      const bool hc = argmax(f.p.col(static_cast<Eigen::Index>(k))) == yc[k];
      const bool hb = argmax(f.q.col(static_cast<Eigen::Index>(k))) == yb[k];
      ok_c += hc;
      ok_b += hb;
      ok_j += hc && hb;
    }
  }
  const auto n = static_cast<double>(e.count);
  e.acc_class = static_cast<double>(ok_c) / n;
  e.acc_bin = static_cast<double>(ok_b) / n;
  e.acc_joint = static_cast<double>(ok_j) / n;
  e.loss_class = ce_c / n;
  e.loss_bin = ce_b / n;
  return e;
}

ModelFile train(const Dataset& data, const Split& split, const TrainConfig& config, const EpochFn& on_epoch) {
  config.validate();
  if (split.train.empty()) throw Error(ErrorCode::kInvalidArgument, "training split is empty");
  const int n_b = static_cast<int>(data.header.n_b);
  const auto n_train = static_cast<Eigen::Index>(split.train.size());

  MatrixXd X(kFeatureDim, n_train);
  std::vector<int> yc(split.train.size()), yb(split.train.size());
  for (Eigen::Index k = 0; k < n_train; ++k) {
    const Sample& s = data.samples.at(split.train[static_cast<std::size_t>(k)]);
    for (int r = 0; r < kFeatureDim; ++r) X(r, k) = s.zeta[r];
    yc[static_cast<std::size_t>(k)] = s.label_class;
    yb[static_cast<std::size_t>(k)] = s.label_bin;
  }

  ModelFile model;
  model.net = Mlp::init(n_b, config.seed);
  model.config = config;
  model.n_phi = static_cast<int>(data.header.n_phi);
  model.dataset_hash = data.header.hash();
  model.geometry_hash = data.header.geometry_hash;
  model.omega_m = data.header.omega_m;
  model.omega_c = data.header.omega_c;
  const double total = static_cast<double>(data.samples.size());
  model.split_train = static_cast<double>(split.train.size()) / total;
  model.split_val = static_cast<double>(split.val.size()) / total;

  Mlp::Tensors& theta = model.net.tensors();
  Mlp::Tensors m1, m2, grad;
  for (int i = 0; i < kTensorCount; ++i) {
    m1[i].setZero(theta[i].rows(), theta[i].cols());
    m2[i].setZero(theta[i].rows(), theta[i].cols());
    grad[i].setZero(theta[i].rows(), theta[i].cols());
  }

  std::vector<std::uint32_t> order(split.train.size());
  std::iota(order.begin(), order.end(), 0U);
  SampleRng rng(config.seed, kShuffleStream);
  auto shuffle = [&] {
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(i)), i - 1);
      std::swap(order[i - 1], order[j]);
    }
  };

  Batch batch;
  double b1t = 1.0, b2t = 1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.reshuffle || epoch == 1) shuffle();
    double sum_cc = 0.0, sum_cb = 0.0;
    std::uint64_t hit_c = 0, hit_b = 0;
    for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), order.size() - first);
      batch.x.resize(kFeatureDim, static_cast<Eigen::Index>(n));
      batch.y_class.resize(n);
      batch.y_bin.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t src = order[first + k];
        batch.x.col(static_cast<Eigen::Index>(k)) = X.col(src);
        batch.y_class[k] = yc[src];
        batch.y_bin[k] = yb[src];
      }
      const Mlp::Loss L = model.net.loss(batch, config.l2, &grad);
      if (!std::isfinite(L.total())) {
        throw Error(ErrorCode::kTrainingDiverged, "non-finite loss at epoch " + std::to_string(epoch) +
                                                      ", batch starting at " + std::to_string(first));
      }
      sum_cc += L.ce_class * static_cast<double>(n);
      sum_cb += L.ce_bin * static_cast<double>(n);
      hit_c += static_cast<std::uint64_t>(L.correct_class);
      hit_b += static_cast<std::uint64_t>(L.correct_bin);

      b1t *= config.beta1;
      b2t *= config.beta2;
      const double step = config.learning_rate * std::sqrt(1.0 - b2t) / (1.0 - b1t);
      for (int i = 0; i < kTensorCount; ++i) {
        m1[i] = config.beta1 * m1[i] + (1.0 - config.beta1) * grad[i];
        m2[i] = config.beta2 * m2[i] + (1.0 - config.beta2) * grad[i].cwiseAbs2();
        theta[i].array() -= step * m1[i].array() / (m2[i].array().sqrt() + config.adam_eps);
      }
    }
    EpochMetrics em;
    em.epoch = epoch;
    const auto nt = static_cast<double>(order.size());
    em.train_loss_class = sum_cc / nt;
    em.train_loss_bin = sum_cb / nt;
    em.train_acc_class = static_cast<double>(hit_c) / nt;
    em.train_acc_bin = static_cast<double>(hit_b) / nt;
    const Evaluation v = evaluate(model.net, data, split.val);
    em.val_acc_class = v.acc_class;
    em.val_acc_bin = v.acc_bin;
    em.val_loss_class = v.loss_class;
    em.val_loss_bin = v.loss_bin;
    model.history.push_back(em);
    if (on_epoch) on_epoch(em);
  }
  return model;
}

std::string model_to_json(const ModelFile& model) {
  const Mlp& net = model.net;
  std::string blob;
  nlohmann::json tensors = nlohmann::json::array();
  const auto names = Mlp::tensor_names();
  for (int i = 0; i < kTensorCount; ++i) {
    const MatrixXd& m = net.tensors()[i];
    tensors.push_back({{"name", names[i]}, {"rows", m.rows()}, {"cols", m.cols()}});
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) detail::put_f64(blob, m(r, c));
    }
  }
  nlohmann::json history = nlohmann::json::array();
  for (const EpochMetrics& e : model.history) {
    history.push_back({{"epoch", e.epoch},
                       {"train_acc_class", e.train_acc_class},
                       {"val_acc_class", e.val_acc_class},
                       {"train_loss_class", e.train_loss_class},
                       {"val_loss_class", e.val_loss_class},
                       {"train_acc_bin", e.train_acc_bin},
                       {"val_acc_bin", e.val_acc_bin},
                       {"train_loss_bin", e.train_loss_bin},
                       {"val_loss_bin", e.val_loss_bin}});
  }
  const TrainConfig& c = model.config;
  nlohmann::json j = {
      {"format", "srsik-mlp"},
      {"version", 1},
      {"network",
       {{"stage1", {kFeatureDim, kHidden, kHidden, kBranchCount}},
        {"stage2", {kStage2In, kHidden, kHidden, net.n_b()}},
        {"hidden_activation", "relu"},
        {"output_activation", "softmax"},
        {"stage2_class_input", {{"train", "softmax"}, {"inference", "one_hot_argmax"}}},
        {"input_normalization", "none"}}},
      {"n_b", net.n_b()},
      {"n_phi", model.n_phi},
      {"omega_m", model.omega_m},
      {"omega_c", model.omega_c},
      {"dataset_hash", hex64(model.dataset_hash)},
      {"geometry_hash", hex64(model.geometry_hash)},
      {"split", {{"train", model.split_train}, {"val", model.split_val}}},
      {"train_config",
       {{"learning_rate", c.learning_rate},
        {"l2", c.l2},
        {"batch_size", c.batch_size},
        {"epochs", c.epochs},
        {"seed", c.seed},
        {"reshuffle", c.reshuffle},
        {"beta1", c.beta1},
        {"beta2", c.beta2},
        {"adam_eps", c.adam_eps},
        {"loss", "categorical_cross_entropy"},
        {"init", "he_uniform"}}},
      {"tensors", tensors},
      {"weights_encoding", "base64 little-endian f64, row-major, tensor order"},
      {"weights", detail::base64_encode(blob)},
      {"metrics", history},
  };
  return j.dump(1);
}

ModelFile model_from_json(std::string_view text) {
  const nlohmann::json j = detail::parse_json(text, "model");
  try {
    if (j.value("format", "") != "srsik-mlp") throw Error(ErrorCode::kParse, "model: unknown format");
    ModelFile m;
    const int n_b = j.at("n_b").get<int>();
    if (n_b < 1) throw Error(ErrorCode::kModelMismatch, "model: invalid n_b");
    m.n_phi = j.at("n_phi").get<int>();
    m.omega_m = j.at("omega_m").get<double>();
    m.omega_c = j.at("omega_c").get<double>();
    m.dataset_hash = parse_hex64(j, "dataset_hash");
    m.geometry_hash = parse_hex64(j, "geometry_hash");
    m.split_train = j.at("split").at("train").get<double>();
    m.split_val = j.at("split").at("val").get<double>();
    const auto& c = j.at("train_config");
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.l2 = c.at("l2").get<double>();
    m.config.batch_size = c.at("batch_size").get<int>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.reshuffle = c.at("reshuffle").get<bool>();
    m.config.beta1 = c.at("beta1").get<double>();
    m.config.beta2 = c.at("beta2").get<double>();
    m.config.adam_eps = c.at("adam_eps").get<double>();

    m.net = Mlp::init(n_b, 0);
    const std::string blob = detail::base64_decode(j.at("weights").get<std::string>());
    const auto shapes = tensor_shapes(n_b);
    std::size_t expected = 0;
    for (const auto& s : shapes) expected += static_cast<std::size_t>(s.first * s.second) * 8;
    if (blob.size() != expected) throw Error(ErrorCode::kModelMismatch, "model: weight blob has the wrong size");
    const auto& tj = j.at("tensors");
    if (!tj.is_array() || tj.size() != kTensorCount) throw Error(ErrorCode::kModelMismatch, "model: tensor list");
    std::size_t off = 0;
    for (int i = 0; i < kTensorCount; ++i) {
      if (tj[i].at("rows").get<int>() != shapes[i].first || tj[i].at("cols").get<int>() != shapes[i].second) {
        throw Error(ErrorCode::kModelMismatch, std::string("model: unexpected shape of ") + Mlp::tensor_names()[i]);
      }
      MatrixXd& t = m.net.tensors()[i];
      for (Eigen::Index r = 0; r < t.rows(); ++r) {
        for (Eigen::Index col = 0; col < t.cols(); ++col) {
          t(r, col) = detail::get_f64(blob.data() + off);
          off += 8;
        }
      }
    }
    for (const auto& e : j.at("metrics")) {
      EpochMetrics em;
      em.epoch = e.at("epoch").get<int>();
      em.train_acc_class = e.at("train_acc_class").get<double>();
      em.val_acc_class = e.at("val_acc_class").get<double>();
      em.train_loss_class = e.at("train_loss_class").get<double>();
      em.val_loss_class = e.at("val_loss_class").get<double>();
      em.train_acc_bin = e.at("train_acc_bin").get<double>();
      em.val_acc_bin = e.at("val_acc_bin").get<double>();
      em.train_loss_bin = e.at("train_loss_bin").get<double>();
      em.val_loss_bin = e.at("val_loss_bin").get<double>();
      m.history.push_back(em);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << model_to_json(model) << '\n';
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) { return model_from_json(detail::read_text_file(path)); }

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& history) {
  out << "epoch,train_acc_class,val_acc_class,train_loss_class,val_loss_class,"
         "train_acc_bin,val_acc_bin,train_loss_bin,val_loss_bin\n";
  out << std::setprecision(10);
  for (const EpochMetrics& e : history) {
    out << e.epoch << ',' << e.train_acc_class << ',' << e.val_acc_class << ',' << e.train_loss_class << ','
        << e.val_loss_class << ',' << e.train_acc_bin << ',' << e.val_acc_bin << ',' << e.train_loss_bin << ','
        << e.val_loss_bin << '\n';
  }
}

}  // namespace srsik
