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
#include "mlsched/harness/runner.hpp"

#include "mlsched/batch/sim.hpp"
#include "mlsched/fed/federation.hpp"
#include "mlsched/harness/arrivals.hpp"
#include "mlsched/harness/random.hpp"

namespace mlsched::harness {

namespace {

sim::MetricsLog run_batch(const ScenarioConfig& cfg) {
  batch::BatchSimulation sim(cfg.batch, cfg.jobs);
  return sim.run();
}

sim::MetricsLog run_fed(const ScenarioConfig& cfg, std::uint64_t seed) {
  fed::LearningCurveOracle oracle;
  oracle.a_max = cfg.oracle.a_max;
  oracle.k = cfg.oracle.k;
  oracle.noise_sd = cfg.oracle.noise_sd;
  oracle.eval_gap = cfg.oracle.eval_gap;
  if (cfg.oracle.jitter > 0.0) {
    auto jitter_stream = named_stream(seed, "fed.jitter");
    for (int n = 0; n < cfg.oracle.nodes; ++n)
      oracle.jitters.push_back(
          uniform_range(jitter_stream, -cfg.oracle.jitter, cfg.oracle.jitter));
  }
  auto noise_stream = named_stream(seed, "fed.noise");
  return run_federation(cfg.fed, oracle, noise_stream);
}

sim::MetricsLog run_serving_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                                     serve::ServingAudit* audit) {
  std::vector<std::vector<sim::SimTime>> traces;
  for (std::size_t s = 0; s < cfg.serving.services.size(); ++s) {
    auto stream = named_stream(seed, "serve.arrivals." + cfg.serving.services[s].id);
    traces.push_back(gen_arrivals(cfg.traces[s], stream, cfg.serving.duration));
  }
  return serve::run_serving(cfg.serving, std::move(traces), audit);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  RunResult result;
  result.seed = seed;
  switch (cfg.kind) {
    case ScenarioKind::Batch:
      result.log = run_batch(cfg);
      break;
    case ScenarioKind::Federation:
      result.log = run_fed(cfg, seed);
      break;
    case ScenarioKind::Serving:
      result.log = run_serving_scenario(cfg, seed, &result.audit);
      break;
  }
  return result;
}

std::vector<RunResult> run_replicates(const ScenarioConfig& cfg) {
  std::vector<RunResult> runs;
  runs.reserve(static_cast<std::size_t>(cfg.replicates));
  for (int r = 0; r < cfg.replicates; ++r)
    runs.push_back(run_scenario(cfg, cfg.seed + static_cast<std::uint64_t>(r)));
  return runs;
}

}  // namespace mlsched::harness
