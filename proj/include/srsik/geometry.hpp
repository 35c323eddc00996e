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

#ifndef SRSIK_GEOMETRY_HPP_
#define SRSIK_GEOMETRY_HPP_

#include "srsik/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace srsik {

/// Link offsets and joint limits of the S-R-S arm. Limits are symmetric
/// about zero and stored in SI units (rad, rad/s, N m).
struct RobotGeometry {
  std::array<double, kDof> d{};
  double d_t = 0.0;
  std::array<double, kDof> q_max{};
  std::array<double, kDof> qd_max{};
  std::array<double, kDof> tau_max{};  // parsed, not used by kinematics

  [[nodiscard]] double shoulder_height() const { return d[0] + d[1]; }
  [[nodiscard]] double d_se() const { return d[2] + d[3]; }
  [[nodiscard]] double d_ew() const { return d[4] + d[5]; }
  [[nodiscard]] double wrist_to_tip() const { return d[6] + d_t; }

  [[nodiscard]] bool within_limits(const JointVector& q, double slack = 0.0) const;

  /// Throws Error(kInvalidArgument) when an offset or limit is not positive.
  void validate() const;

  /// FNV-1a over the IEEE bytes of every field; recorded in dataset headers.
  [[nodiscard]] std::uint64_t hash() const;

  /// KUKA LBR iiwa 14 R820 offsets with a 70 mm tool offset.
  static RobotGeometry iiwa14();
};

/// Parses the geometry object: `d` (7 offsets, m), `d_t` (m), `q_max_deg`,
/// `qd_max_deg_s`, `tau_max_Nm` (7 each). Extra keys are ignored.
RobotGeometry parse_geometry(std::string_view json_text);
RobotGeometry load_geometry(const std::filesystem::path& path);
std::string geometry_to_json(const RobotGeometry& geom);

}  // namespace srsik

#endif  // SRSIK_GEOMETRY_HPP_
