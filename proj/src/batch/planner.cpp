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
#include "mlsched/batch/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mlsched::batch {

const StageSpec& BatchJob::stage(int stage_id) const {
  for (const auto& s : dag) {
    if (s.stage_id == stage_id) return s;
  }
  throw std::out_of_range("job '" + id + "': unknown stage " + std::to_string(stage_id));
}

void BatchJob::validate() const {
  if (deadline <= 0.0) throw std::invalid_argument("job '" + id + "': deadline must be > 0");
  if (dag.empty()) throw std::invalid_argument("job '" + id + "': empty DAG");
  std::set<int> ids;
  for (const auto& s : dag) {
    if (!ids.insert(s.stage_id).second)
      throw std::invalid_argument("job '" + id + "': duplicate stage id " +
                                  std::to_string(s.stage_id));
    if (s.records <= 0.0)
      throw std::invalid_argument("job '" + id + "': stage records must be > 0");
    if (s.true_rate <= 0.0)
      throw std::invalid_argument("job '" + id + "': stage rate must be > 0");
    if (s.shuffle_cost < 0.0)
      throw std::invalid_argument("job '" + id + "': shuffle cost must be >= 0");
  }
  for (const auto& s : dag) {
    for (int d : s.deps) {
      if (!ids.count(d))
        throw std::invalid_argument("job '" + id + "': stage " + std::to_string(s.stage_id) +
                                    " depends on unknown stage " + std::to_string(d));
    }
  }
  // Cycle check: repeatedly peel stages whose deps are all peeled.
  std::set<int> done;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& s : dag) {
      if (done.count(s.stage_id)) continue;
      bool ready = true;
      for (int d : s.deps) {
        if (!done.count(d)) { ready = false; break; }
      }
      if (ready) {
        done.insert(s.stage_id);
        progress = true;
      }
    }
  }
  if (done.size() != dag.size())
    throw std::invalid_argument("job '" + id + "': DAG has a cycle");
}

StageProfile profile_job(const BatchJob& job, double error_factor) {
  StageProfile profile;
  for (const auto& s : job.dag) {
    profile[s.stage_id] = s.true_rate * (1.0 + error_factor);
  }
  return profile;
}

std::vector<double> memory_rebalance(const std::vector<double>& requests,
                                     double total_memory_gb) {
  std::vector<double> alloc(requests.size(), 0.0);
  if (requests.empty()) return alloc;

  std::vector<bool> capped(requests.size(), false);
  double remaining = total_memory_gb;
  std::size_t uncapped = requests.size();
  while (uncapped > 0) {
    const double share = remaining / static_cast<double>(uncapped);
    bool changed = false;
    for (std::size_t i = 0; i < requests.size(); ++i) {
      if (!capped[i] && requests[i] <= share) {
        alloc[i] = requests[i];
        remaining -= requests[i];
        capped[i] = true;
        --uncapped;
        changed = true;
      }
    }
    if (!changed) {
      // All remaining requests exceed the equal share; split evenly.
      for (std::size_t i = 0; i < requests.size(); ++i) {
        if (!capped[i]) alloc[i] = share;
      }
      break;
    }
  }
  return alloc;
}

namespace {

double profiled_duration(const StageSpec& s, const StageProfile& profile,
                         double cores_per_executor) {
  const double rate = profile.at(s.stage_id);
  return s.records / (rate * cores_per_executor) + s.shuffle_cost;
}

}  // namespace

double longest_remaining_path(const BatchJob& job, int stage_id,
                              const StageProfile& profile,
                              const std::set<int>& completed,
                              double cores_per_executor) {
  // Successor adjacency over the not-yet-completed stages.
  std::map<int, std::vector<int>> succ;
  for (const auto& s : job.dag) {
    if (completed.count(s.stage_id)) continue;
    for (int d : s.deps) {
      if (!completed.count(d)) succ[d].push_back(s.stage_id);
    }
  }
  std::map<int, double> memo;
  auto walk = [&](auto&& self, int id) -> double {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    double best_tail = 0.0;
    auto sit = succ.find(id);
    if (sit != succ.end()) {
      for (int next : sit->second) best_tail = std::max(best_tail, self(self, next));
    }
    const double d = profiled_duration(job.stage(id), profile, cores_per_executor) + best_tail;
    memo[id] = d;
    return d;
  };
  return walk(walk, stage_id);
}

StagePlan best_effort_plan(const PlanRequest& req) {
  const StageSpec& stage = req.job->stage(req.stage_id);
  StagePlan plan;
  plan.stage_id = req.stage_id;
  plan.local_deadline = req.job->absolute_deadline();
  plan.executor_count = std::max(1, req.max_executors);
  plan.per_executor_records = stage.records / plan.executor_count;
  plan.best_effort = true;
  return plan;
}

StagePlan plan_stage(const PlanRequest& req) {
  const BatchJob& job = *req.job;
  const StageSpec& stage = job.stage(req.stage_id);
  const double abs_deadline = job.absolute_deadline();
  if (req.now >= abs_deadline) {
    throw DeadlineAlreadyPassed(job.id, req.now, abs_deadline);
  }

  const double effective_deadline =
      job.submit_time + job.deadline * (1.0 - req.deadline_margin);
  const double budget = effective_deadline - req.now;
  if (budget <= stage.shuffle_cost) {
    // Inside the margin zone (or swallowed by the shuffle): no usable
    // budget left, run at maximum parallelism.
    return best_effort_plan(req);
  }

  const double own = profiled_duration(stage, *req.profile, req.cores_per_executor);
  const double path = longest_remaining_path(job, req.stage_id, *req.profile,
                                             req.completed, req.cores_per_executor);
  const double local_budget = budget * own / path;

  StagePlan plan;
  plan.stage_id = req.stage_id;
  plan.local_deadline = req.now + local_budget;

  const double processing_budget = local_budget - stage.shuffle_cost;
  if (processing_budget <= 0.0) return best_effort_plan(req);

  const double required_rate = stage.records / processing_budget;
  const double per_executor_rate = req.profile->at(req.stage_id) * req.cores_per_executor;
  int count = static_cast<int>(std::ceil(required_rate / per_executor_rate - 1e-12));
  plan.executor_count = std::clamp(count, 1, std::max(1, req.max_executors));
  plan.per_executor_records = stage.records / plan.executor_count;
  return plan;
}

}  // namespace mlsched::batch
