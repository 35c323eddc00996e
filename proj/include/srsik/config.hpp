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

#ifndef SRSIK_CONFIG_HPP_
#define SRSIK_CONFIG_HPP_

#include "srsik/geometry.hpp"
#include "srsik/mlp.hpp"
#include "srsik/numeric_ik.hpp"
#include "srsik/selection.hpp"
#include "srsik/trajopt.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace srsik {

/// Everything a pipeline run reads from its JSON config. Each section is
/// optional and falls back to the defaults of its struct.
///
///   { "robot": {...}, "selection": {"omega_m", "omega_c", "n_phi", "n_b"},
///     "dls": {"damping", "tol", "max_iters"},
///     "trajopt": {"intervals", "r_weight", "u_max", "t_min", "t_max", "tol", "max_iters"},
///     "training": {"learning_rate", "l2", "batch_size", "epochs", "seed"} }
///
/// `r_weight` and `u_max` accept a number or an array of 7.
struct RunConfig {
  RobotGeometry robot = RobotGeometry::iiwa14();
  SelectionConfig selection;
  DlsSettings dls;
  TrajConfig trajopt;
  TrainConfig training;

  void validate() const;
};

RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

}  // namespace srsik

#endif  // SRSIK_CONFIG_HPP_
