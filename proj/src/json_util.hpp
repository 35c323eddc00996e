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

// Internal JSON helpers shared by the config, geometry and model readers.

#ifndef SRSIK_SRC_JSON_UTIL_HPP_
#define SRSIK_SRC_JSON_UTIL_HPP_

#include "srsik/geometry.hpp"
#include "srsik/types.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace srsik {

RobotGeometry geometry_from_json(const nlohmann::json& j);
nlohmann::json geometry_json(const RobotGeometry& g);

namespace detail {

inline nlohmann::json parse_json(std::string_view text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path), path.string());
}

inline double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::kParse, std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

inline std::array<double, kDof> array7(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::kParse, std::string("missing array field '") + key + "'");
  }
  const auto& a = j.at(key);
  if (a.size() != kDof) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' must have 7 entries, got " +
                                       std::to_string(a.size()));
  }
  std::array<double, kDof> out{};
  for (int i = 0; i < kDof; ++i) {
    if (!a[i].is_number()) {
      throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be numeric");
    }
    out[i] = a[i].get<double>();
  }
  return out;
}

template <typename T>
T value_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace detail
}  // namespace srsik

#endif  // SRSIK_SRC_JSON_UTIL_HPP_
