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
#ifndef MLSCHED_BATCH_SIM_HPP
#define MLSCHED_BATCH_SIM_HPP

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "mlsched/batch/contention.hpp"
#include "mlsched/batch/job.hpp"
#include "mlsched/batch/planner.hpp"
#include "mlsched/control/pi.hpp"
#include "mlsched/sim/cluster.hpp"
#include "mlsched/sim/engine.hpp"

namespace mlsched::batch {

/// Fifo replays the classic scheduler: one job at a time, whole cluster,
/// stages in dependency order. The other two plan per-stage deadlines and
/// drive per-executor core grants from progress controllers; they differ
/// only in how a node splits cores under contention.
enum class BatchPolicy { Fifo, DynaEdf, DynaProportional };

struct BatchSimConfig {
  std::vector<sim::NodeSpec> cluster;
  BatchPolicy policy = BatchPolicy::DynaEdf;
  double control_period = 1.0;
  double kp = 2.0;
  double ki = 0.5;
  double cores_per_executor = 4.0;  // nominal sizing used by the planner
  int max_executors_per_stage = 0;  // 0: derive from cluster core count
  double profiling_error = 0.0;     // relative error on profiled rates
  double deadline_margin = 0.0;     // plan against (1 - margin) * budget
};

/// Replays a fixed set of jobs against one policy. Single-shot: build,
/// run(), read the log. Progress is integrated piecewise-constant between
/// control rounds, and partition completions are exact events solved from
/// the current grant, so results do not depend on the tick raster beyond
/// the controller's own reaction time.
class BatchSimulation {
 public:
  BatchSimulation(BatchSimConfig config, std::vector<BatchJob> jobs);

  const sim::MetricsLog& run();

  const sim::MetricsLog& log() const { return engine_.log(); }
  const std::vector<BatchJob>& jobs() const { return jobs_; }

 private:
  struct ExecRt {
    std::size_t index = 0;  // position in execs_, stable id
    std::size_t job = 0;
    int stage_id = 0;
    int node = 0;
    double assigned = 0.0;
    double processed = 0.0;
    double granted = 0.0;
    double true_rate = 0.0;
    double profiled_rate = 0.0;
    double stage_start = 0.0;
    double proc_deadline = 0.0;
    double last_update = 0.0;
    control::PiControllerState pi;
    std::uint64_t event_gen = 0;  // invalidates stale completion events
    bool done = false;
  };

  struct StageRt {
    StagePlan plan;
    std::vector<std::size_t> executors;
    int live = 0;
    double start = 0.0;
    double shuffle_cost = 0.0;
  };

  struct JobRt {
    StageProfile profile;
    std::set<int> completed;
    std::set<int> started;
    std::map<int, StageRt> stages;
    double memory_grant = 0.0;
    double core_seconds = 0.0;
    bool submitted = false;
    bool done = false;
  };

  int max_executors() const;
  int pick_node() const;
  bool all_done() const { return jobs_done_ == jobs_.size(); }

  void submit_job(std::size_t j);
  void start_ready_stages(std::size_t j);
  void start_stage(std::size_t j, int stage_id, const StagePlan& plan);
  void integrate_progress(ExecRt& e);
  void reschedule_completion(ExecRt& e);
  void control_round(bool step_pi, bool sample);
  void partition_complete(std::size_t index);
  void stage_complete(std::size_t j, int stage_id);
  void finish_job(std::size_t j);
  void rebalance_memory();

  void fifo_submit(std::size_t j);
  void fifo_next_stage(std::size_t j);
  void fifo_stage_complete(std::size_t j, int stage_id);

  BatchSimConfig cfg_;
  std::vector<BatchJob> jobs_;
  sim::SimEngine engine_;
  std::vector<JobRt> rt_;
  std::vector<ExecRt> execs_;
  std::vector<std::size_t> fifo_queue_;  // submitted, not yet finished
  bool fifo_running_ = false;
  std::size_t jobs_done_ = 0;
  bool ran_ = false;
};

}  // namespace mlsched::batch

#endif  // MLSCHED_BATCH_SIM_HPP
