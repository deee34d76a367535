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
#ifndef MLSCHED_SIM_METRICS_HPP
#define MLSCHED_SIM_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlsched/sim/cluster.hpp"
#include "mlsched/sim/time.hpp"

namespace mlsched::sim {

/// One time-series observation. Series names are stable strings such as
/// "cores:<service>" or "node_cores:<node>".
struct Sample {
  SimTime time = 0.0;
  std::string series;
  double value = 0.0;
};

/// Completed batch computation.
struct JobRecord {
  std::string job_id;
  SimTime submit = 0.0;
  SimTime deadline_abs = 0.0;
  SimTime finish = 0.0;
  bool violated = false;
  double mean_cores = 0.0;
};

/// One federation round. `has_target` is false for bootstrap rounds, which
/// run before the per-round planner is initialized.
struct RoundRecord {
  int round = 0;
  bool has_target = false;
  double target = 0.0;
  int epochs = 0;
  int cumulative_epochs = 0;
  double ac_fit = 0.0;
  double ac_eval = 0.0;
};

/// One served inference request, from gateway arrival to completion.
struct RequestRecord {
  std::uint64_t id = 0;
  std::string service;
  SimTime arrival = 0.0;
  SimTime start = 0.0;
  SimTime finish = 0.0;
  DeviceKind device = DeviceKind::Cpu;

  double response_time() const { return finish - arrival; }
};

/// One serving measurement window for one service. `cores` is the total CPU
/// grant held by the service across nodes while the window was open.
struct WindowRecord {
  std::string service;
  SimTime window_start = 0.0;
  double agg_rt = 0.0;
  bool violated = false;
  double cores = 0.0;
};

/// Append-only run output. Identical (scenario, seed) pairs produce
/// identical logs, which is what the end-to-end determinism suite checks.
struct MetricsLog {
  std::vector<Sample> samples;
  std::vector<JobRecord> jobs;
  std::vector<RoundRecord> rounds;
  std::vector<RequestRecord> requests;
  std::vector<WindowRecord> windows;

  void sample(SimTime t, std::string series, double value) {
    samples.push_back(Sample{t, std::move(series), value});
  }
};

}  // namespace mlsched::sim

#endif  // MLSCHED_SIM_METRICS_HPP
