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

#include <doctest.h>

#include <filesystem>

using namespace srsik;

namespace {
const std::filesystem::path kShipped = std::filesystem::path(SRSIK_SOURCE_DIR) / "config" / "iiwa14.json";
}

TEST_CASE("shipped config equals the built-in defaults") {
  const RunConfig c = load_run_config(kShipped);
  const RunConfig d;
  CHECK(c.robot.hash() == RobotGeometry::iiwa14().hash());
  CHECK(c.selection.weights.omega_m == d.selection.weights.omega_m);
  CHECK(c.selection.n_phi == 100);
  CHECK(c.trajopt.r_weight == d.trajopt.r_weight);
  CHECK(c.trajopt.u_max == d.trajopt.u_max);
  CHECK(c.training.batch_size == 2000);
  CHECK(c.dls.max_iters == 50);
}

TEST_CASE("missing sections fall back to defaults and serialization round trips") {
  const RunConfig c = parse_run_config(R"({"trajopt": {"u_max": [1, 2, 3, 4, 5, 6, 7]}})");
  CHECK(c.trajopt.u_max[6] == 7.0);
  CHECK(c.trajopt.intervals == 50);
  const RunConfig back = parse_run_config(run_config_to_json(c));
  CHECK(back.trajopt.u_max == c.trajopt.u_max);
  CHECK(back.robot.hash() == c.robot.hash());
  CHECK(run_config_to_json(back) == run_config_to_json(c));
}

TEST_CASE("malformed configs are rejected") {
  auto code = [](const char* text) {
    try {
      parse_run_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;  // not thrown
  };
  CHECK(code("{") == ErrorCode::kParse);
  CHECK(code("[]") == ErrorCode::kParse);
  CHECK(code(R"({"selection": {"n_phi": "many"}})") == ErrorCode::kParse);
  CHECK(code(R"({"trajopt": {"u_max": [1, 2]}})") == ErrorCode::kParse);
  CHECK(code(R"({"selection": {"omega_c": -1}})") == ErrorCode::kInvalidArgument);
  CHECK(code(R"({"trajopt": {"intervals": 1}})") == ErrorCode::kInvalidArgument);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), Error);
}
