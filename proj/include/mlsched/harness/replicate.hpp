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
#ifndef MLSCHED_HARNESS_REPLICATE_HPP
#define MLSCHED_HARNESS_REPLICATE_HPP

#include <string>
#include <vector>

#include "mlsched/harness/runner.hpp"
#include "mlsched/harness/scenario.hpp"

namespace mlsched::harness {

/// One named pass/fail verdict with the measured evidence.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

bool all_passed(const std::vector<CheckResult>& checks);

/// Runs the batch scenario under fifo, edf and proportional and checks the
/// expected contrast: fifo misses the tightest deadline but keeps slack on
/// the rest (< 0.7 of budget), both controlled strategies meet everything,
/// and proportional finishes inside [0.85, 1.0] of each absolute deadline.
std::vector<CheckResult> replicate_batch(const ScenarioConfig& cfg);

/// Runs both trajectories over the replicate seeds and checks attainment:
/// quadratic final accuracy >= sla on >= 90% of seeds, linear final
/// accuracy in [sla - 0.10, sla) on >= 80% of seeds, and every run's
/// bootstrap rounds log the fixed epoch count without a target.
std::vector<CheckResult> replicate_federation(const ScenarioConfig& cfg);

/// Serving replication keeps the per-seed runs so property suites can
/// audit them after the headline checks.
struct ServingReplication {
  std::vector<RunResult> rules;
  std::vector<RunResult> roma;
  std::vector<CheckResult> checks;
};

/// Runs rules and roma over the replicate seeds and checks: the rule
/// baseline accumulates >= 10 violation windows per seed on average, roma
/// totals at most half the baseline's violation windows, and roma's mean
/// allocated cores do not exceed the baseline's.
ServingReplication replicate_serving(const ScenarioConfig& cfg);

/// Dispatches on cfg.kind and returns the checks.
std::vector<CheckResult> run_replication(const ScenarioConfig& cfg);

}  // namespace mlsched::harness

#endif  // MLSCHED_HARNESS_REPLICATE_HPP
