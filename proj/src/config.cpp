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

#include "srsik/config.hpp"

#include "json_util.hpp"

namespace srsik {
namespace {

using nlohmann::json;

JointVector joint_values(const json& j, const char* key, const JointVector& fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_number()) return JointVector::Constant(j.at(key).get<double>());
  const auto a = detail::array7(j, key);
  return Eigen::Map<const JointVector>(a.data());
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "run config must be a JSON object");
  RunConfig c;
  if (j.contains("robot")) c.robot = geometry_from_json(j.at("robot"));
  const json none = json::object();
  const json& s = j.contains("selection") ? j.at("selection") : none;
  c.selection.weights.omega_m = detail::value_or(s, "omega_m", c.selection.weights.omega_m);
  c.selection.weights.omega_c = detail::value_or(s, "omega_c", c.selection.weights.omega_c);
  c.selection.n_phi = detail::value_or(s, "n_phi", c.selection.n_phi);
  c.selection.n_b = detail::value_or(s, "n_b", c.selection.n_b);

  const json& d = j.contains("dls") ? j.at("dls") : none;
  c.dls.damping = detail::value_or(d, "damping", c.dls.damping);
  c.dls.tol = detail::value_or(d, "tol", c.dls.tol);
  c.dls.max_iters = detail::value_or(d, "max_iters", c.dls.max_iters);

  const json& t = j.contains("trajopt") ? j.at("trajopt") : none;
  c.trajopt.intervals = detail::value_or(t, "intervals", c.trajopt.intervals);
  c.trajopt.r_weight = joint_values(t, "r_weight", c.trajopt.r_weight);
  c.trajopt.u_max = joint_values(t, "u_max", c.trajopt.u_max);
  c.trajopt.t_min = detail::value_or(t, "t_min", c.trajopt.t_min);
  c.trajopt.t_max = detail::value_or(t, "t_max", c.trajopt.t_max);
  c.trajopt.tol = detail::value_or(t, "tol", c.trajopt.tol);
  c.trajopt.max_iters = detail::value_or(t, "max_iters", c.trajopt.max_iters);

  const json& n = j.contains("training") ? j.at("training") : none;
  c.training.learning_rate = detail::value_or(n, "learning_rate", c.training.learning_rate);
  c.training.l2 = detail::value_or(n, "l2", c.training.l2);
  c.training.batch_size = detail::value_or(n, "batch_size", c.training.batch_size);
  c.training.epochs = detail::value_or(n, "epochs", c.training.epochs);
  c.training.seed = detail::value_or(n, "seed", c.training.seed);
  c.validate();
  return c;
}

}  // namespace

void RunConfig::validate() const {
  robot.validate();
  selection.validate();
  dls.validate();
  trajopt.validate();
  training.validate();
}

RunConfig parse_run_config(std::string_view json_text) {
  const json j = detail::parse_json(json_text, "run config");
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("run config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(detail::read_text_file(path));
}

std::string run_config_to_json(const RunConfig& c) {
  auto vec = [](const JointVector& v) { return std::vector<double>(v.data(), v.data() + kDof); };
  const json j = {
      {"robot", geometry_json(c.robot)},
      {"selection",
       {{"omega_m", c.selection.weights.omega_m},
        {"omega_c", c.selection.weights.omega_c},
        {"n_phi", c.selection.n_phi},
        {"n_b", c.selection.n_b}}},
      {"dls", {{"damping", c.dls.damping}, {"tol", c.dls.tol}, {"max_iters", c.dls.max_iters}}},
      {"trajopt",
       {{"intervals", c.trajopt.intervals},
        {"r_weight", vec(c.trajopt.r_weight)},
        {"u_max", vec(c.trajopt.u_max)},
        {"t_min", c.trajopt.t_min},
        {"t_max", c.trajopt.t_max},
        {"tol", c.trajopt.tol},
        {"max_iters", c.trajopt.max_iters}}},
      {"training",
       {{"learning_rate", c.training.learning_rate},
        {"l2", c.training.l2},
        {"batch_size", c.training.batch_size},
        {"epochs", c.training.epochs},
        {"seed", c.training.seed}}},
  };
  return j.dump(2);
}

}  // namespace srsik
