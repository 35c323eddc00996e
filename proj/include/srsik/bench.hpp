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

// Wall-clock microbenchmarks of the resolution pipeline.

#ifndef SRSIK_BENCH_HPP_
#define SRSIK_BENCH_HPP_

#include "srsik/config.hpp"
#include "srsik/mlp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace srsik {

struct BenchOptions {
  int targets = 1000;
  int warmup = 200;       // untimed calls before each entry
  int repetitions = 5;    // timed passes over the targets; the median is kept
  std::uint64_t seed = 11;
  void validate() const;
};

struct BenchEntry {
  std::string name;
  double ns_per_op = 0.0;
  std::int64_t ops = 0;     // timed calls per repetition
  int warmup = 0;
  int repetitions = 0;
  double reference_ns = 0.0;  // published figure, 0 if none
};

struct BenchReport {
  BenchOptions options;
  std::vector<BenchEntry> entries;
  int dls_converged = 0;       // targets on which DLS converged; the paired set
  bool trained_model = false;  // false: random weights
  double guided_vs_dls = 0.0;  // DLS ns / guided ns on the paired set
  double det_vs_analytic = 0.0;

  [[nodiscard]] const BenchEntry* find(const std::string& name) const;
};

/// `model` may be null; inference then runs on freshly initialised weights.
BenchReport run_bench(const RunConfig& config, const ModelFile* model, const BenchOptions& options);

std::string bench_report_json(const BenchReport& report);

}  // namespace srsik

#endif  // SRSIK_BENCH_HPP_
