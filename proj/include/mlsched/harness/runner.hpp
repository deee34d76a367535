/*
 * Copyright 2026 The mlsched Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MLSCHED_HARNESS_RUNNER_HPP
#define MLSCHED_HARNESS_RUNNER_HPP

#include <cstdint>
#include <vector>

#include "mlsched/harness/scenario.hpp"
#include "mlsched/serve/sim.hpp"
#include "mlsched/sim/metrics.hpp"

namespace mlsched::harness {

/// One simulation run. `audit` is populated for serving runs only.
struct RunResult {
  std::uint64_t seed = 0;
  sim::MetricsLog log;
  serve::ServingAudit audit;
};

/// Runs one replicate. Every stochastic component draws from its own
/// named sub-stream of `seed` ("fed.jitter", "fed.noise",
/// "serve.arrivals.<service>"), so traces for one component never perturb
/// another's draws. Batch runs are deterministic and ignore the streams.
RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// Runs seeds cfg.seed .. cfg.seed + cfg.replicates - 1 in order.
std::vector<RunResult> run_replicates(const ScenarioConfig& cfg);

}  // namespace mlsched::harness

#endif  // MLSCHED_HARNESS_RUNNER_HPP
