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

#include "srsik/bench.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace srsik;

TEST_CASE("bench report lists every entry with its counts") {
  BenchOptions opt;
  opt.targets = 40;
  opt.warmup = 5;
  opt.repetitions = 3;
  const BenchReport rep = run_bench(RunConfig{}, nullptr, opt);
  CHECK_FALSE(rep.trained_model);
  for (const char* name : {"aik", "manipulability_analytic", "manipulability_det", "nn_inference",
                           "guided_select_end_to_end", "dls_to_convergence", "exhaustive_select"}) {
    CAPTURE(name);
    const BenchEntry* e = rep.find(name);
    REQUIRE(e != nullptr);
    CHECK(e->repetitions == 3);
    CHECK(e->warmup == 5);
  }
  CHECK(rep.find("aik")->ops == 40);
  CHECK(rep.find("dls_to_convergence")->ops == rep.dls_converged);
  CHECK(rep.dls_converged > 0);
  CHECK(rep.find("aik")->ns_per_op > 0.0);
  CHECK(rep.guided_vs_dls > 0.0);

  const auto j = nlohmann::json::parse(bench_report_json(rep));
  CHECK(j.at("entries").size() == rep.entries.size());
  CHECK(j.at("paired_targets").get<int>() == rep.dls_converged);
  CHECK(j.at("entries").at(0).contains("reference_ns"));
}

TEST_CASE("bench options are validated") {
  BenchOptions opt;
  opt.repetitions = 0;
  CHECK_THROWS_AS(run_bench(RunConfig{}, nullptr, opt), Error);
}
