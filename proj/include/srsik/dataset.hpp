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
 * @file dataset.hpp
 * @brief Labeled (q0, target) pairs for training the parameter predictor.
 *
 * File layout, little-endian:
 *
 *   offset  size  field
 *        0     4  magic "RDIK"
 *        4     4  u32 version (1)
 *        8     8  u64 sample count
 *       16     4  u32 n_b
 *       20     4  u32 n_phi
 *       24     8  f64 omega_m
 *       32     8  f64 omega_c
 *       40     8  u64 geometry hash
 *       48     8  u64 seed
 *       56        samples: 19 x f64 features, u8 class, u8 bin (154 bytes)
 *
 * Sample k is drawn from an RNG stream derived from (seed, k) alone, so the
 * payload does not depend on the number of workers.
 */

#ifndef SRSIK_DATASET_HPP_
#define SRSIK_DATASET_HPP_

#include "srsik/geometry.hpp"
#include "srsik/selection.hpp"
#include "srsik/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

namespace srsik {

inline constexpr int kFeatureDim = 19;
using Features = Eigen::Matrix<double, kFeatureDim, 1>;

/// [q0 (7) | e_x (3) | e_y (3) | e_z (3) | p (3)], e_* the columns of R.
Features encode_features(const JointVector& q0, const Pose& target);

struct Sample {
  std::array<double, kFeatureDim> zeta{};
  std::uint8_t label_class = 0;
  std::uint8_t label_bin = 0;

  [[nodiscard]] JointVector q0() const;
  [[nodiscard]] Pose target() const;
};

inline constexpr std::uint32_t kDatasetVersion = 1;
inline constexpr std::size_t kDatasetHeaderBytes = 56;
inline constexpr std::size_t kSampleBytes = kFeatureDim * 8 + 2;

struct DatasetHeader {
  std::uint32_t version = kDatasetVersion;
  std::uint64_t sample_count = 0;
  std::uint32_t n_b = 0;
  std::uint32_t n_phi = 0;
  double omega_m = 0.0;
  double omega_c = 0.0;
  std::uint64_t geometry_hash = 0;
  std::uint64_t seed = 0;

  bool operator==(const DatasetHeader&) const = default;
  [[nodiscard]] SelectionConfig selection() const;
  /// FNV-1a over the serialized header bytes.
  [[nodiscard]] std::uint64_t hash() const;
};

struct Dataset {
  DatasetHeader header;
  std::vector<Sample> samples;
};

/// Counter-based stream: mt19937_64 seeded by splitmix64 of (seed, index).
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct Pair {
  JointVector q0;
  Pose target;
};

/// q0 uniform within the limits; target = FK of a second uniform draw.
Pair sample_pair(const RobotGeometry& geom, SampleRng& rng);

/// Exhaustive label of one pair. Throws Error(kNoFeasibleTarget).
Sample label_pair(const RobotGeometry& geom, const SelectionConfig& cfg, const JointVector& q0,
                  const Pose& target);

/// Sample `index` of the stream: draws pairs until one has a feasible cell.
/// `discarded` receives the number of rejected pairs.
Sample generate_sample(const RobotGeometry& geom, const SelectionConfig& cfg, std::uint64_t seed,
                       std::uint64_t index, int* discarded = nullptr);

struct GenerateStats {
  std::uint64_t count = 0;
  std::uint64_t discarded = 0;
  double seconds = 0.0;
  std::array<std::uint64_t, 8> class_histogram{};

  [[nodiscard]] double micros_per_sample() const { return count ? 1e6 * seconds / count : 0.0; }
};

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Generates `count` samples with `workers` threads and writes them to `path`.
GenerateStats generate_dataset(const RobotGeometry& geom, const SelectionConfig& cfg,
                               std::uint64_t count, std::uint64_t seed, int workers,
                               const std::filesystem::path& path, const ProgressFn& progress = {});

/// In-memory variant used by tests and small runs.
Dataset generate_samples(const RobotGeometry& geom, const SelectionConfig& cfg, std::uint64_t count,
                         std::uint64_t seed, int workers, GenerateStats* stats = nullptr);

void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path);
DatasetHeader read_dataset_header(const std::filesystem::path& path);

void write_header_bytes(std::ostream& out, const DatasetHeader& h);

struct Split {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> val;
  std::vector<std::uint32_t> test;
};

/// Deterministic shuffle of 0..count-1 seeded by `seed`, cut by fractions.
Split split_indices(std::uint64_t count, std::uint64_t seed, double train = 0.8, double val = 0.1);

/// One row per sample: index, 19 features, class, bin.
void export_csv(std::ostream& out, const Dataset& data, std::uint64_t limit = UINT64_MAX);

}  // namespace srsik

#endif  // SRSIK_DATASET_HPP_
