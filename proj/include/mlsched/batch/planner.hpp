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
#ifndef MLSCHED_BATCH_PLANNER_HPP
#define MLSCHED_BATCH_PLANNER_HPP

#include <set>
#include <vector>

#include "mlsched/batch/job.hpp"

namespace mlsched::batch {

/// Profiling is modeled as the plant's true rate perturbed by a relative
/// error factor; the DAG structure is copied verbatim.
StageProfile profile_job(const BatchJob& job, double error_factor);

/// Water-filling fair share: equal split capped at each request, surplus
/// redistributed among uncapped jobs. Result is aligned with `requests`.
std::vector<double> memory_rebalance(const std::vector<double>& requests,
                                     double total_memory_gb);

struct PlanRequest {
  const BatchJob* job = nullptr;
  int stage_id = 0;
  sim::SimTime now = 0.0;
  const StageProfile* profile = nullptr;
  std::set<int> completed;           // stage ids already finished
  double cores_per_executor = 1.0;   // u_max of one executor
  int max_executors = 1;             // cluster-wide parallelism cap
  double deadline_margin = 0.0;      // plan against (1 - margin) * budget
};

/// Splits the remaining budget across the longest remaining path and sizes
/// the stage's executor pool to meet its share. Throws
/// DeadlineAlreadyPassed when `now` is past the job's absolute deadline;
/// callers degrade to best_effort_plan and log the violation.
StagePlan plan_stage(const PlanRequest& req);

/// Max-parallelism fallback used after DeadlineAlreadyPassed.
StagePlan best_effort_plan(const PlanRequest& req);

/// Profiled duration of the longest path that starts at `stage_id` in the
/// not-yet-completed DAG (inclusive). Exposed for tests.
double longest_remaining_path(const BatchJob& job, int stage_id,
                              const StageProfile& profile,
                              const std::set<int>& completed,
                              double cores_per_executor);

}  // namespace mlsched::batch

#endif  // MLSCHED_BATCH_PLANNER_HPP
