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
#include "mlsched/batch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mlsched/batch/controller.hpp"
#include "mlsched/sim/time.hpp"

namespace mlsched::batch {

BatchSimulation::BatchSimulation(BatchSimConfig config, std::vector<BatchJob> jobs)
    : cfg_(std::move(config)), jobs_(std::move(jobs)) {
  if (cfg_.cluster.empty()) throw std::invalid_argument("empty cluster");
  for (const auto& n : cfg_.cluster) n.validate();
  if (cfg_.control_period <= 0.0) throw std::invalid_argument("control_period must be > 0");
  if (cfg_.cores_per_executor <= 0.0)
    throw std::invalid_argument("cores_per_executor must be > 0");
  if (cfg_.profiling_error <= -1.0)
    throw std::invalid_argument("profiling_error must be > -1");
  for (const auto& j : jobs_) {
    j.validate();
    if (j.submit_time < 0.0) throw std::invalid_argument("job '" + j.id + "': negative submit");
  }
  rt_.resize(jobs_.size());
}

int BatchSimulation::max_executors() const {
  if (cfg_.max_executors_per_stage > 0) return cfg_.max_executors_per_stage;
  const double slots = sim::total_cores(cfg_.cluster) / cfg_.cores_per_executor;
  return std::max(1, static_cast<int>(std::floor(slots + 1e-9)));
}

int BatchSimulation::pick_node() const {
  std::vector<int> live(cfg_.cluster.size(), 0);
  for (const auto& e : execs_) {
    if (!e.done) ++live[static_cast<std::size_t>(e.node)];
  }
  int best = 0;
  for (std::size_t n = 1; n < live.size(); ++n) {
    if (live[n] < live[static_cast<std::size_t>(best)]) best = static_cast<int>(n);
  }
  return best;
}

const sim::MetricsLog& BatchSimulation::run() {
  if (ran_) return engine_.log();
  ran_ = true;
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    engine_.schedule(jobs_[j].submit_time, sim::EventKind::JobSubmit,
                     [this, j] { submit_job(j); });
  }
  return engine_.run_all();
}

void BatchSimulation::submit_job(std::size_t j) {
  rt_[j].submitted = true;
  rebalance_memory();
  if (cfg_.policy == BatchPolicy::Fifo) {
    fifo_submit(j);
    return;
  }
  rt_[j].profile = profile_job(jobs_[j], cfg_.profiling_error);
  start_ready_stages(j);
  control_round(false, false);
  engine_.start_tick_loop(cfg_.control_period, [this](sim::SimTime) {
    control_round(true, true);
    return !all_done();
  });
}

void BatchSimulation::start_ready_stages(std::size_t j) {
  JobRt& job = rt_[j];
  for (const auto& s : jobs_[j].dag) {
    if (job.completed.count(s.stage_id) || job.started.count(s.stage_id)) continue;
    bool ready = true;
    for (int d : s.deps) {
      if (!job.completed.count(d)) { ready = false; break; }
    }
    if (!ready) continue;

    PlanRequest req;
    req.job = &jobs_[j];
    req.stage_id = s.stage_id;
    req.now = engine_.now();
    req.profile = &job.profile;
    req.completed = job.completed;
    req.cores_per_executor = cfg_.cores_per_executor;
    req.max_executors = max_executors();
    req.deadline_margin = cfg_.deadline_margin;
    StagePlan plan;
    try {
      plan = plan_stage(req);
    } catch (const DeadlineAlreadyPassed&) {
      plan = best_effort_plan(req);
    }
    start_stage(j, s.stage_id, plan);
  }
}

void BatchSimulation::start_stage(std::size_t j, int stage_id, const StagePlan& plan) {
  const StageSpec& spec = jobs_[j].stage(stage_id);
  const double now = engine_.now();

  StageRt st;
  st.plan = plan;
  st.live = plan.executor_count;
  st.start = now;
  st.shuffle_cost = spec.shuffle_cost;

  for (int i = 0; i < plan.executor_count; ++i) {
    ExecRt e;
    e.index = execs_.size();
    e.job = j;
    e.stage_id = stage_id;
    e.node = pick_node();
    e.assigned = plan.per_executor_records;
    e.true_rate = spec.true_rate;
    e.profiled_rate = rt_[j].profile.at(stage_id);
    e.stage_start = now;
    e.proc_deadline = plan.local_deadline - spec.shuffle_cost;
    e.last_update = now;
    e.pi.kp = cfg_.kp;
    e.pi.ki = cfg_.ki;
    e.pi.u_min = 0.0;
    e.pi.u_max = cfg_.cluster[static_cast<std::size_t>(e.node)].cores;
    e.pi.period = cfg_.control_period;
    st.executors.push_back(e.index);
    execs_.push_back(std::move(e));
  }
  rt_[j].started.insert(stage_id);
  rt_[j].stages[stage_id] = std::move(st);
}

void BatchSimulation::integrate_progress(ExecRt& e) {
  const double now = engine_.now();
  const double dt = now - e.last_update;
  if (dt <= 0.0) return;
  e.processed = std::min(e.assigned, e.processed + e.granted * e.true_rate * dt);
  rt_[e.job].core_seconds += e.granted * dt;
  e.last_update = now;
}

void BatchSimulation::reschedule_completion(ExecRt& e) {
  const std::uint64_t gen = ++e.event_gen;
  const double remaining = e.assigned - e.processed;
  if (remaining <= 0.0) {
    // Progress integration already consumed the whole partition (several
    // executors finishing at one instant); deliver the completion now.
    engine_.schedule(engine_.now(), sim::EventKind::PartitionComplete,
                     [this, idx = e.index, gen] {
                       ExecRt& exec = execs_[idx];
                       if (exec.done || exec.event_gen != gen) return;
                       partition_complete(idx);
                     });
    return;
  }
  if (e.granted <= 0.0) return;  // stalled; a later round may revive it
  const double finish = engine_.now() + remaining / (e.granted * e.true_rate);
  engine_.schedule(finish, sim::EventKind::PartitionComplete, [this, idx = e.index, gen] {
    ExecRt& exec = execs_[idx];
    if (exec.done || exec.event_gen != gen) return;
    partition_complete(idx);
  });
}

void BatchSimulation::control_round(bool step_pi, bool sample) {
  const double now = engine_.now();
  for (auto& e : execs_) {
    if (!e.done) integrate_progress(e);
  }

  const ContentionStrategy strategy = cfg_.policy == BatchPolicy::DynaProportional
                                          ? ContentionStrategy::Proportional
                                          : ContentionStrategy::Edf;
  for (std::size_t n = 0; n < cfg_.cluster.size(); ++n) {
    std::vector<CoreDemand> demands;
    std::vector<std::size_t> members;
    for (auto& e : execs_) {
      if (e.done || e.node != static_cast<int>(n)) continue;
      StageExecutorView view;
      view.assigned_records = e.assigned;
      view.processed_records = e.processed;
      view.profiled_rate = e.profiled_rate;
      view.stage_start = e.stage_start;
      view.proc_deadline = e.proc_deadline;
      double demand = 0.0;
      if (step_pi) {
        demand = control_step(e.pi, view, now);
      } else {
        // Event-triggered rounds redistribute cores without advancing the
        // controller state, so the integral accrues once per period.
        control::PiControllerState scratch = e.pi;
        demand = control_step(scratch, view, now);
      }
      demands.push_back(CoreDemand{static_cast<std::int64_t>(e.index), demand,
                                   jobs_[e.job].absolute_deadline()});
      members.push_back(e.index);
    }
    if (members.empty()) continue;
    const std::vector<double> grants =
        resolve_contention(demands, cfg_.cluster[n].cores, strategy);
    for (std::size_t i = 0; i < members.size(); ++i) {
      ExecRt& e = execs_[members[i]];
      if (std::abs(grants[i] - e.granted) > 1e-12) {
        e.granted = grants[i];
        reschedule_completion(e);
      }
    }
  }

  if (sample) {
    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      if (!rt_[j].submitted || rt_[j].done) continue;
      double total = 0.0;
      for (const auto& e : execs_) {
        if (!e.done && e.job == j) total += e.granted;
      }
      engine_.log().sample(now, "cores:" + jobs_[j].id, total);
    }
    for (std::size_t n = 0; n < cfg_.cluster.size(); ++n) {
      double total = 0.0;
      for (const auto& e : execs_) {
        if (!e.done && e.node == static_cast<int>(n)) total += e.granted;
      }
      engine_.log().sample(now, "node_cores:" + cfg_.cluster[n].id, total);
    }
  }
}

void BatchSimulation::partition_complete(std::size_t index) {
  ExecRt& e = execs_[index];
  integrate_progress(e);
  e.processed = e.assigned;
  e.done = true;
  e.granted = 0.0;
  ++e.event_gen;

  StageRt& st = rt_[e.job].stages.at(e.stage_id);
  --st.live;
  if (st.live == 0) {
    engine_.schedule(engine_.now() + st.shuffle_cost, sim::EventKind::StageComplete,
                     [this, j = e.job, sid = e.stage_id] { stage_complete(j, sid); });
  }
  control_round(false, false);  // hand the freed cores to whoever needs them
}

void BatchSimulation::stage_complete(std::size_t j, int stage_id) {
  rt_[j].completed.insert(stage_id);
  if (rt_[j].completed.size() == jobs_[j].dag.size()) {
    finish_job(j);
  } else {
    start_ready_stages(j);
  }
  control_round(false, false);
}

void BatchSimulation::finish_job(std::size_t j) {
  JobRt& job = rt_[j];
  job.done = true;
  ++jobs_done_;
  const double now = engine_.now();
  const double span = now - jobs_[j].submit_time;

  sim::JobRecord rec;
  rec.job_id = jobs_[j].id;
  rec.submit = jobs_[j].submit_time;
  rec.deadline_abs = jobs_[j].absolute_deadline();
  rec.finish = now;
  rec.violated = now > rec.deadline_abs + 1e-9;
  rec.mean_cores = span > 0.0 ? job.core_seconds / span : 0.0;
  engine_.log().jobs.push_back(std::move(rec));

  rebalance_memory();
}

void BatchSimulation::rebalance_memory() {
  std::vector<std::size_t> live;
  std::vector<double> requests;
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    if (rt_[j].submitted && !rt_[j].done) {
      live.push_back(j);
      requests.push_back(jobs_[j].memory_request);
    }
  }
  const std::vector<double> grants = memory_rebalance(requests, sim::total_memory(cfg_.cluster));
  for (std::size_t i = 0; i < live.size(); ++i) {
    rt_[live[i]].memory_grant = grants[i];
    engine_.log().sample(engine_.now(), "memory:" + jobs_[live[i]].id, grants[i]);
  }
}

void BatchSimulation::fifo_submit(std::size_t j) {
  fifo_queue_.push_back(j);
  if (!fifo_running_) {
    fifo_running_ = true;
    fifo_next_stage(fifo_queue_.front());
  }
}

void BatchSimulation::fifo_next_stage(std::size_t j) {
  JobRt& job = rt_[j];
  for (const auto& s : jobs_[j].dag) {
    if (job.completed.count(s.stage_id) || job.started.count(s.stage_id)) continue;
    bool ready = true;
    for (int d : s.deps) {
      if (!job.completed.count(d)) { ready = false; break; }
    }
    if (!ready) continue;

    // The whole cluster works on one stage at a time.
    job.started.insert(s.stage_id);
    const double cores = sim::total_cores(cfg_.cluster);
    const double duration = s.records / (s.true_rate * cores) + s.shuffle_cost;
    engine_.schedule(engine_.now() + duration, sim::EventKind::StageComplete,
                     [this, j, sid = s.stage_id] { fifo_stage_complete(j, sid); });
    return;
  }
  throw std::logic_error("job '" + jobs_[j].id + "': no ready stage");
}

void BatchSimulation::fifo_stage_complete(std::size_t j, int stage_id) {
  JobRt& job = rt_[j];
  job.completed.insert(stage_id);
  job.core_seconds += jobs_[j].stage(stage_id).records / jobs_[j].stage(stage_id).true_rate;
  if (job.completed.size() != jobs_[j].dag.size()) {
    fifo_next_stage(j);
    return;
  }
  finish_job(j);
  fifo_queue_.erase(fifo_queue_.begin());
  if (!fifo_queue_.empty()) {
    fifo_next_stage(fifo_queue_.front());
  } else {
    fifo_running_ = false;
  }
}

}  // namespace mlsched::batch
