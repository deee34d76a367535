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
#ifndef MLSCHED_BATCH_JOB_HPP
#define MLSCHED_BATCH_JOB_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlsched/sim/time.hpp"

namespace mlsched::batch {

/// One DAG stage. `true_rate` is the plant's ground truth (records per
/// second per core-unit); controllers only ever see the profiled rate.
struct StageSpec {
  int stage_id = 0;
  std::vector<int> deps;
  double records = 0.0;
  double true_rate = 0.0;
  double shuffle_cost = 0.0;  // fixed serial delay at stage end, seconds
};

/// A deadline-bearing batch computation. The deadline is relative to the
/// submission instant; the absolute deadline is submit_time + deadline.
struct BatchJob {
  std::string id;
  sim::SimTime submit_time = 0.0;
  double deadline = 0.0;
  std::vector<StageSpec> dag;
  double memory_request = 0.0;

  double absolute_deadline() const { return submit_time + deadline; }
  const StageSpec& stage(int stage_id) const;
  void validate() const;  // throws std::invalid_argument on a malformed DAG
};

/// Per-stage rates as seen by the planner and controllers.
using StageProfile = std::map<int, double>;  // stage_id -> profiled rate

/// Output of the stage planner: a share of the job budget plus the degree
/// of parallelism needed to meet it.
struct StagePlan {
  int stage_id = 0;
  sim::SimTime local_deadline = 0.0;
  int executor_count = 1;
  double per_executor_records = 0.0;
  bool best_effort = false;  // deadline unattainable, running flat out
};

/// Raised by the planner when a stage becomes ready after the job's
/// absolute deadline has already passed.
class DeadlineAlreadyPassed : public std::runtime_error {
 public:
  DeadlineAlreadyPassed(const std::string& job_id, double now, double deadline)
      : std::runtime_error("job '" + job_id + "': stage planned at t=" +
                           std::to_string(now) + " after absolute deadline " +
                           std::to_string(deadline)) {}
};

}  // namespace mlsched::batch

#endif  // MLSCHED_BATCH_JOB_HPP
