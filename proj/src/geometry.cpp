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

#include "srsik/geometry.hpp"

#include "json_util.hpp"

#include <bit>
#include <cmath>

namespace srsik {

bool Pose::is_valid(double tol) const {
  if (!R.allFinite() || !p.allFinite()) return false;
  const double ortho = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kNoFeasibleTarget: return "NoFeasibleTarget";
    case ErrorCode::kGeometryMismatch: return "GeometryMismatch";
    case ErrorCode::kTrainingDiverged: return "TrainingDiverged";
    case ErrorCode::kModelMismatch: return "ModelMismatch";
  }
  return "Unknown";
}

bool RobotGeometry::within_limits(const JointVector& q, double slack) const {
  for (int i = 0; i < kDof; ++i) {
    if (!(std::abs(q[i]) <= q_max[i] + slack)) return false;
  }
  return true;
}

void RobotGeometry::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, "robot geometry: " + what);
  };
  for (int i = 0; i < kDof; ++i) {
    const std::string j = std::to_string(i + 1);
    require(std::isfinite(d[i]) && d[i] > 0.0, "offset d" + j + " must be positive");
    require(std::isfinite(q_max[i]) && q_max[i] > 0.0, "joint limit " + j + " must be positive");
    require(std::isfinite(qd_max[i]) && qd_max[i] > 0.0, "velocity limit " + j + " must be positive");
    require(std::isfinite(tau_max[i]) && tau_max[i] > 0.0, "torque limit " + j + " must be positive");
  }
  require(std::isfinite(d_t) && d_t > 0.0, "tool offset d_t must be positive");
}

std::uint64_t RobotGeometry::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (double v : d) mix(v);
  mix(d_t);
  for (double v : q_max) mix(v);
  for (double v : qd_max) mix(v);
  for (double v : tau_max) mix(v);
  return h;
}

RobotGeometry RobotGeometry::iiwa14() {
  RobotGeometry g;
  g.d = {0.1575, 0.2025, 0.2045, 0.2155, 0.1845, 0.2155, 0.081};
  g.d_t = 0.070;
  const std::array<double, kDof> q_deg{170, 120, 170, 120, 170, 120, 175};
  const std::array<double, kDof> qd_deg{85, 85, 100, 75, 130, 135, 135};
  for (int i = 0; i < kDof; ++i) {
    g.q_max[i] = q_deg[i] * kPi / 180.0;
    g.qd_max[i] = qd_deg[i] * kPi / 180.0;
  }
  g.tau_max = {320, 320, 176, 176, 110, 40, 40};
  return g;
}

RobotGeometry geometry_from_json(const nlohmann::json& j) {
  RobotGeometry g;
  g.d = detail::array7(j, "d");
  g.d_t = detail::number(j, "d_t");
  const auto q_deg = detail::array7(j, "q_max_deg");
  const auto qd_deg = detail::array7(j, "qd_max_deg_s");
  g.tau_max = detail::array7(j, "tau_max_Nm");
  for (int i = 0; i < kDof; ++i) {
    g.q_max[i] = q_deg[i] * kPi / 180.0;
    g.qd_max[i] = qd_deg[i] * kPi / 180.0;
  }
  g.validate();
  return g;
}

RobotGeometry parse_geometry(std::string_view json_text) {
  return geometry_from_json(detail::parse_json(json_text, "robot geometry"));
}

RobotGeometry load_geometry(const std::filesystem::path& path) {
  const auto j = detail::read_json_file(path);
  return geometry_from_json(j.contains("robot") ? j.at("robot") : j);
}

nlohmann::json geometry_json(const RobotGeometry& g) {
  // Rounded to 1e-9 deg so that printed limits reload bit-exactly.
  auto degrees = [](double rad) { return std::round(rad * 180.0 / kPi * 1e9) / 1e9; };
  std::array<double, kDof> q_deg{};
  std::array<double, kDof> qd_deg{};
  for (int i = 0; i < kDof; ++i) {
    q_deg[i] = degrees(g.q_max[i]);
    qd_deg[i] = degrees(g.qd_max[i]);
  }
  return {{"d", g.d},
          {"d_t", g.d_t},
          {"q_max_deg", q_deg},
          {"qd_max_deg_s", qd_deg},
          {"tau_max_Nm", g.tau_max}};
}

std::string geometry_to_json(const RobotGeometry& geom) { return geometry_json(geom).dump(2); }

}  // namespace srsik
