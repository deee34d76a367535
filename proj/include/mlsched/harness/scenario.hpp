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
#ifndef MLSCHED_HARNESS_SCENARIO_HPP
#define MLSCHED_HARNESS_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlsched/batch/sim.hpp"
#include "mlsched/fed/federation.hpp"
#include "mlsched/harness/arrivals.hpp"
#include "mlsched/serve/sim.hpp"

namespace mlsched::harness {

/// File-level failures: unreadable path, malformed JSON.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema failures. The message always names the offending key, e.g.
/// "workload.jobs[1].deadline: must be > 0".
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Batch, Federation, Serving };

const char* kind_name(ScenarioKind k);

/// Synthetic training plant parameters. The per-node jitters themselves
/// are drawn per replicate seed by the runner; the scenario only fixes
/// the magnitude.
struct FedOracleSpec {
  int nodes = 8;
  double a_max = 0.85;
  double k = 0.21;
  double noise_sd = 0.0;
  double eval_gap = 0.01;
  double jitter = 0.0;  // relative spread of per-node learning speed
};

/// One experiment, fully resolved: defaults applied, every value range
/// checked. The kind selects which of the three member groups is live.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Batch;
  std::uint64_t seed = 1;
  int replicates = 1;

  batch::BatchSimConfig batch;  // cluster lives inside
  std::vector<batch::BatchJob> jobs;

  fed::FederationConfig fed;
  FedOracleSpec oracle;

  serve::ServingSimConfig serving;  // nodes + services live inside
  std::vector<ArrivalSpec> traces;  // aligned with serving.services

  /// Printable id of the configured policy ("edf", "quadratic", "roma", ...).
  std::string policy_id() const;
};

/// Parses and validates one scenario object. Throws ValidationError with
/// the offending key path on any schema violation, including unknown keys.
ScenarioConfig parse_scenario(const nlohmann::json& j);

/// Reads a scenario file. ParseError on I/O or JSON syntax problems,
/// ValidationError as in parse_scenario.
ScenarioConfig load_scenario(const std::string& path);

/// Fully-resolved JSON image of a config, with every default materialized.
/// parse_scenario(scenario_to_json(c)) reproduces c for all valid configs.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

}  // namespace mlsched::harness

#endif  // MLSCHED_HARNESS_SCENARIO_HPP
