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
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "mlsched/batch/contention.hpp"
#include "mlsched/batch/controller.hpp"
#include "mlsched/batch/planner.hpp"
#include "mlsched/batch/sim.hpp"

using namespace mlsched;
using batch::BatchJob;
using batch::BatchPolicy;
using batch::BatchSimConfig;
using batch::BatchSimulation;
using batch::ContentionStrategy;
using batch::CoreDemand;
using batch::StageSpec;

namespace {

BatchJob chain_job(std::string id, double submit, double deadline,
                   std::vector<double> stage_records, double rate,
                   double shuffle = 0.0, double memory = 8.0) {
  BatchJob job;
  job.id = std::move(id);
  job.submit_time = submit;
  job.deadline = deadline;
  job.memory_request = memory;
  for (std::size_t i = 0; i < stage_records.size(); ++i) {
    StageSpec s;
    s.stage_id = static_cast<int>(i);
    if (i > 0) s.deps = {static_cast<int>(i - 1)};
    s.records = stage_records[i];
    s.true_rate = rate;
    s.shuffle_cost = shuffle;
    job.dag.push_back(std::move(s));
  }
  return job;
}

sim::NodeSpec node(std::string id, double cores, double memory = 64.0, int gpus = 0) {
  sim::NodeSpec n;
  n.id = std::move(id);
  n.cores = cores;
  n.memory_gb = memory;
  n.gpus = gpus;
  return n;
}

}  // namespace

TEST_CASE("water filling caps small requests and splits the surplus") {
  auto a = batch::memory_rebalance({10.0, 50.0, 60.0}, 90.0);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == doctest::Approx(10.0));
  CHECK(a[1] == doctest::Approx(40.0));
  CHECK(a[2] == doctest::Approx(40.0));
}

TEST_CASE("water filling grants everything when memory is plentiful") {
  auto a = batch::memory_rebalance({10.0, 20.0}, 100.0);
  CHECK(a[0] == 10.0);
  CHECK(a[1] == 20.0);
}

TEST_CASE("water filling splits evenly when all requests are large") {
  auto a = batch::memory_rebalance({30.0, 30.0, 30.0}, 60.0);
  CHECK(a[0] == doctest::Approx(20.0));
  CHECK(a[1] == doctest::Approx(20.0));
  CHECK(a[2] == doctest::Approx(20.0));
}

TEST_CASE("water filling handles an empty job list") {
  CHECK(batch::memory_rebalance({}, 50.0).empty());
}

TEST_CASE("profiling perturbs every stage rate by the error factor") {
  BatchJob job = chain_job("j", 0, 100, {100.0, 200.0}, 10.0);
  auto profile = batch::profile_job(job, 0.1);
  CHECK(profile.at(0) == doctest::Approx(11.0));
  CHECK(profile.at(1) == doctest::Approx(11.0));
}

TEST_CASE("job validation rejects malformed DAGs") {
  BatchJob job = chain_job("j", 0, 100, {100.0}, 10.0);
  CHECK_NOTHROW(job.validate());

  BatchJob dup = job;
  dup.dag.push_back(dup.dag[0]);
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);

  BatchJob unknown = job;
  unknown.dag[0].deps = {7};
  CHECK_THROWS_AS(unknown.validate(), std::invalid_argument);

  BatchJob cycle = chain_job("j", 0, 100, {100.0, 100.0}, 10.0);
  cycle.dag[0].deps = {1};
  CHECK_THROWS_AS(cycle.validate(), std::invalid_argument);
}

TEST_CASE("longest remaining path follows the slowest branch") {
  // Diamond: 0 -> {1, 2} -> 3, profiled at one core per executor.
  BatchJob job;
  job.id = "d";
  job.deadline = 100;
  job.dag = {
      StageSpec{0, {}, 100.0, 10.0, 0.0},
      StageSpec{1, {0}, 200.0, 10.0, 0.0},
      StageSpec{2, {0}, 50.0, 10.0, 0.0},
      StageSpec{3, {1, 2}, 100.0, 10.0, 0.0},
  };
  auto profile = batch::profile_job(job, 0.0);
  CHECK(batch::longest_remaining_path(job, 0, profile, {}, 1.0) == doctest::Approx(40.0));
  CHECK(batch::longest_remaining_path(job, 1, profile, {0}, 1.0) == doctest::Approx(30.0));
  CHECK(batch::longest_remaining_path(job, 2, profile, {0}, 1.0) == doctest::Approx(15.0));
}

TEST_CASE("stage planner sizes the executor pool from the required rate") {
  BatchJob job = chain_job("j", 0, 10, {1000.0}, 10.0);
  batch::PlanRequest req;
  auto profile = batch::profile_job(job, 0.0);
  req.job = &job;
  req.stage_id = 0;
  req.now = 0.0;
  req.profile = &profile;
  req.cores_per_executor = 4.0;
  req.max_executors = 100;

  // 1000 records in 10 s needs 100 rec/s; one executor delivers 40.
  auto plan = batch::plan_stage(req);
  CHECK(plan.executor_count == 3);
  CHECK(plan.per_executor_records == doctest::Approx(1000.0 / 3.0));
  CHECK(plan.local_deadline == doctest::Approx(10.0));
  CHECK_FALSE(plan.best_effort);
}

TEST_CASE("stage planner does not round an exact fit upward") {
  BatchJob job = chain_job("j", 0, 25, {1000.0}, 10.0);
  auto profile = batch::profile_job(job, 0.0);
  batch::PlanRequest req;
  req.job = &job;
  req.stage_id = 0;
  req.now = 0.0;
  req.profile = &profile;
  req.cores_per_executor = 4.0;
  req.max_executors = 100;
  CHECK(batch::plan_stage(req).executor_count == 1);
}

TEST_CASE("stage planner splits the budget along the remaining path") {
  BatchJob job = chain_job("j", 0, 100, {1000.0, 3000.0}, 10.0);
  auto profile = batch::profile_job(job, 0.0);
  batch::PlanRequest req;
  req.job = &job;
  req.stage_id = 0;
  req.now = 0.0;
  req.profile = &profile;
  req.cores_per_executor = 4.0;
  req.max_executors = 100;

  // Profiled durations 25 s and 75 s, so the first stage gets a quarter
  // of the 100 s budget.
  auto plan = batch::plan_stage(req);
  CHECK(plan.local_deadline == doctest::Approx(25.0));
  CHECK(plan.executor_count == 1);
}

TEST_CASE("deadline margin tightens the planning budget") {
  BatchJob job = chain_job("j", 0, 100, {4000.0}, 10.0);
  auto profile = batch::profile_job(job, 0.0);
  batch::PlanRequest req;
  req.job = &job;
  req.stage_id = 0;
  req.now = 0.0;
  req.profile = &profile;
  req.cores_per_executor = 4.0;
  req.max_executors = 100;

  CHECK(batch::plan_stage(req).executor_count == 1);  // 40 rec/s fits one
  req.deadline_margin = 0.04;
  CHECK(batch::plan_stage(req).executor_count == 2);  // 41.7 rec/s does not
}

TEST_CASE("planning after the absolute deadline throws") {
  BatchJob job = chain_job("j", 0, 10, {100.0}, 10.0);
  auto profile = batch::profile_job(job, 0.0);
  batch::PlanRequest req;
  req.job = &job;
  req.stage_id = 0;
  req.now = 12.0;
  req.profile = &profile;
  req.cores_per_executor = 4.0;
  req.max_executors = 8;
  CHECK_THROWS_AS(batch::plan_stage(req), batch::DeadlineAlreadyPassed);

  auto fallback = batch::best_effort_plan(req);
  CHECK(fallback.best_effort);
  CHECK(fallback.executor_count == 8);
}

TEST_CASE("contention passes demands through when they fit") {
  std::vector<CoreDemand> d = {{1, 4.0, 100.0}, {2, 6.0, 50.0}};
  for (auto strat : {ContentionStrategy::Edf, ContentionStrategy::Proportional}) {
    auto g = batch::resolve_contention(d, 16.0, strat);
    CHECK(g[0] == 4.0);
    CHECK(g[1] == 6.0);
  }
}

TEST_CASE("earliest deadline wins; the cut demand gets the remainder") {
  std::vector<CoreDemand> d = {{1, 8.0, 10.0}, {2, 6.0, 20.0}, {3, 4.0, 30.0}};
  auto g = batch::resolve_contention(d, 16.0, ContentionStrategy::Edf);
  CHECK(g[0] == 8.0);
  CHECK(g[1] == 6.0);
  CHECK(g[2] == doctest::Approx(2.0));
}

TEST_CASE("demands past the cut get nothing") {
  std::vector<CoreDemand> d = {{1, 8.0, 10.0}, {2, 6.0, 20.0}, {3, 4.0, 30.0}};
  auto g = batch::resolve_contention(d, 8.0, ContentionStrategy::Edf);
  CHECK(g[0] == 8.0);
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 0.0);
}

TEST_CASE("deadline ties break on executor id") {
  std::vector<CoreDemand> d = {{2, 4.0, 10.0}, {1, 4.0, 10.0}};
  auto g = batch::resolve_contention(d, 5.0, ContentionStrategy::Edf);
  CHECK(g[0] == doctest::Approx(1.0));  // executor 2, served second
  CHECK(g[1] == 4.0);                   // executor 1, served first
}

TEST_CASE("proportional scaling preserves demand ratios") {
  std::vector<CoreDemand> d = {{1, 8.0, 10.0}, {2, 6.0, 20.0}, {3, 4.0, 30.0}};
  auto g = batch::resolve_contention(d, 16.0, ContentionStrategy::Proportional);
  CHECK(g[0] == doctest::Approx(64.0 / 9.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(48.0 / 9.0).epsilon(1e-12));
  CHECK(g[2] == doctest::Approx(32.0 / 9.0).epsilon(1e-12));
  CHECK(g[0] + g[1] + g[2] == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("contention rejects negative inputs") {
  CHECK_THROWS_AS(batch::resolve_contention({{1, -1.0, 5.0}}, 4.0, ContentionStrategy::Edf),
                  std::invalid_argument);
  CHECK_THROWS_AS(batch::resolve_contention({{1, 1.0, 5.0}}, -4.0, ContentionStrategy::Edf),
                  std::invalid_argument);
}

TEST_CASE("on-track executor demands exactly the feedforward") {
  control::PiControllerState pi;
  pi.u_max = 16.0;
  batch::StageExecutorView v;
  v.assigned_records = 50.0;
  v.processed_records = 0.0;
  v.profiled_rate = 10.0;
  v.stage_start = 0.0;
  v.proc_deadline = 5.0;
  CHECK(batch::control_step(pi, v, 0.0) == 1.0);  // 50 / (10 * 5)
}

TEST_CASE("executor behind schedule demands extra cores") {
  control::PiControllerState pi;
  pi.u_max = 16.0;
  batch::StageExecutorView v;
  v.assigned_records = 50.0;
  v.processed_records = 10.0;
  v.profiled_rate = 10.0;
  v.stage_start = 0.0;
  v.proc_deadline = 5.0;
  // expected 0.5, actual 0.2, ff = 40 / 25 = 1.6, u = 1.6 + 2*0.3 + 0.5*0.3
  CHECK(batch::control_step(pi, v, 2.5) == doctest::Approx(2.35).epsilon(1e-12));
}

TEST_CASE("executor past its processing deadline demands the maximum") {
  control::PiControllerState pi;
  pi.u_max = 16.0;
  batch::StageExecutorView v;
  v.assigned_records = 50.0;
  v.processed_records = 10.0;
  v.profiled_rate = 10.0;
  v.stage_start = 0.0;
  v.proc_deadline = 5.0;
  CHECK(batch::control_step(pi, v, 5.0) == 16.0);
  CHECK(batch::control_step(pi, v, 7.0) == 16.0);
}

TEST_CASE("finished executor demands the minimum") {
  control::PiControllerState pi;
  batch::StageExecutorView v;
  v.assigned_records = 50.0;
  v.processed_records = 50.0;
  v.profiled_rate = 10.0;
  v.proc_deadline = 5.0;
  CHECK(batch::control_step(pi, v, 2.0) == pi.u_min);
}

TEST_CASE("uncontended job finishes exactly at its paced deadline") {
  BatchSimConfig cfg;
  cfg.cluster = {node("n0", 16.0)};
  cfg.policy = BatchPolicy::DynaEdf;
  BatchSimulation sim(cfg, {chain_job("J", 0, 120, {4800.0}, 10.0)});
  const auto& log = sim.run();

  REQUIRE(log.jobs.size() == 1);
  const auto& rec = log.jobs[0];
  CHECK(rec.finish == doctest::Approx(120.0));
  CHECK(std::abs(rec.finish - 120.0) < 1.0);  // within one control period
  CHECK_FALSE(rec.violated);
  CHECK(rec.mean_cores == doctest::Approx(4.0));
}

TEST_CASE("classic scheduler runs jobs one after another") {
  BatchSimConfig cfg;
  cfg.cluster = {node("n0", 16.0)};
  cfg.policy = BatchPolicy::Fifo;
  std::vector<BatchJob> jobs = {
      chain_job("J1", 0, 100, {1600.0}, 10.0),
      chain_job("J2", 0, 12, {800.0}, 10.0),
  };
  BatchSimulation sim(cfg, jobs);
  const auto& log = sim.run();

  REQUIRE(log.jobs.size() == 2);
  CHECK(log.jobs[0].job_id == "J1");
  CHECK(log.jobs[0].finish == doctest::Approx(10.0));
  CHECK_FALSE(log.jobs[0].violated);
  CHECK(log.jobs[1].job_id == "J2");
  CHECK(log.jobs[1].finish == doctest::Approx(15.0));
  CHECK(log.jobs[1].violated);  // head-of-line blocking past its deadline
}

TEST_CASE("earliest deadline preempts the background job") {
  BatchSimConfig cfg;
  cfg.cluster = {node("n0", 4.0)};
  cfg.policy = BatchPolicy::DynaEdf;
  cfg.deadline_margin = 0.02;  // plan slightly ahead of the hard deadline
  std::vector<BatchJob> jobs = {
      chain_job("slack", 0, 400, {4800.0}, 10.0),
      chain_job("tight", 10, 25, {800.0}, 10.0),
  };
  BatchSimulation sim(cfg, jobs);
  const auto& log = sim.run();

  REQUIRE(log.jobs.size() == 2);
  std::map<std::string, sim::JobRecord> by_id;
  for (const auto& j : log.jobs) by_id[j.job_id] = j;
  CHECK_FALSE(by_id.at("tight").violated);
  CHECK(by_id.at("tight").finish == doctest::Approx(34.5).epsilon(0.05));
  CHECK_FALSE(by_id.at("slack").violated);
  CHECK(by_id.at("slack").finish <= 400.0 + 1e-6);
  // The tight job really was starving the other one for a while.
  CHECK(by_id.at("slack").finish > 400.0 * 0.9);
}

TEST_CASE("proportional split slows both jobs but meets planned deadlines") {
  BatchSimConfig cfg;
  cfg.cluster = {node("n0", 4.0)};
  cfg.policy = BatchPolicy::DynaProportional;
  cfg.deadline_margin = 0.25;
  std::vector<BatchJob> jobs = {
      chain_job("a", 0, 400, {2000.0}, 10.0),
      chain_job("b", 10, 28, {800.0}, 10.0),
  };
  BatchSimulation sim(cfg, jobs);
  const auto& log = sim.run();

  REQUIRE(log.jobs.size() == 2);
  for (const auto& j : log.jobs) CHECK_FALSE(j.violated);

  double max_node = 0.0;
  for (const auto& s : log.samples) {
    if (s.series == "node_cores:n0") max_node = std::max(max_node, s.value);
  }
  CHECK(max_node <= 4.0 + 1e-9);
  CHECK(max_node > 3.9);  // the node saturated while both jobs were live
}

TEST_CASE("stage ready after the deadline degrades to best effort") {
  BatchSimConfig cfg;
  cfg.cluster = {node("n0", 4.0)};
  cfg.policy = BatchPolicy::DynaEdf;
  BatchSimulation sim(cfg, {chain_job("late", 0, 10, {2400.0, 800.0}, 10.0)});
  const auto& log = sim.run();

  REQUIRE(log.jobs.size() == 1);
  CHECK(log.jobs[0].violated);
  CHECK(log.jobs[0].finish == doctest::Approx(80.0).epsilon(0.05));
}

TEST_CASE("memory follows submissions and completions") {
  BatchSimConfig cfg;
  cfg.cluster = {node("n0", 16.0, 90.0)};
  cfg.policy = BatchPolicy::Fifo;
  std::vector<BatchJob> jobs = {
      chain_job("A", 0, 100, {160.0}, 10.0, 0.0, 10.0),
      chain_job("B", 0, 100, {160.0}, 10.0, 0.0, 50.0),
      chain_job("C", 0, 100, {160.0}, 10.0, 0.0, 60.0),
  };
  BatchSimulation sim(cfg, jobs);
  const auto& log = sim.run();

  std::map<std::string, double> last;
  for (const auto& s : log.samples) last[s.series] = s.value;
  // After A finishes the split is (50, 60; 90) -> (45, 45); after B only
  // C remains and gets its full request.
  CHECK(last.at("memory:C") == doctest::Approx(60.0));

  double after_all_three = 0.0;
  for (const auto& s : log.samples) {
    if (s.time == 0.0 && s.series == "memory:C") after_all_three = s.value;
  }
  CHECK(after_all_three == doctest::Approx(40.0));
}

TEST_CASE("core time equals the work each job carried") {
  // Whatever the policy does with grants, integrating cores over time
  // must equal records / rate summed over stages.
  std::uint64_t x = 12345;
  auto rnd = [&x](double lo, double hi) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    const double u = static_cast<double>(x >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };

  for (auto policy : {BatchPolicy::Fifo, BatchPolicy::DynaEdf, BatchPolicy::DynaProportional}) {
    BatchSimConfig cfg;
    cfg.cluster = {node("n0", 8.0), node("n1", 8.0)};
    cfg.policy = policy;
    std::vector<BatchJob> jobs;
    for (int j = 0; j < 6; ++j) {
      const int stages = 1 + static_cast<int>(rnd(0.0, 3.0));
      std::vector<double> recs;
      for (int s = 0; s < stages; ++s) recs.push_back(std::floor(rnd(100.0, 1500.0)));
      jobs.push_back(chain_job("j" + std::to_string(j), std::floor(rnd(0.0, 60.0)),
                               std::floor(rnd(100.0, 400.0)), recs, 10.0));
    }
    BatchSimulation sim(cfg, jobs);
    const auto& log = sim.run();

    REQUIRE(log.jobs.size() == jobs.size());
    for (const auto& rec : log.jobs) {
      const BatchJob* spec = nullptr;
      for (const auto& j : jobs) {
        if (j.id == rec.job_id) spec = &j;
      }
      REQUIRE(spec != nullptr);
      double want = 0.0;
      for (const auto& s : spec->dag) want += s.records / s.true_rate;
      const double got = rec.mean_cores * (rec.finish - rec.submit);
      CHECK(got == doctest::Approx(want).epsilon(1e-6));
      CHECK(rec.finish >= spec->submit_time);
    }
    for (const auto& s : log.samples) {
      if (s.series.rfind("node_cores:", 0) == 0) CHECK(s.value <= 8.0 + 1e-9);
    }
  }
}

TEST_CASE("identical runs produce identical logs") {
  auto make = [] {
    BatchSimConfig cfg;
    cfg.cluster = {node("n0", 4.0)};
    cfg.policy = BatchPolicy::DynaEdf;
    std::vector<BatchJob> jobs = {
        chain_job("slack", 0, 400, {4800.0}, 10.0),
        chain_job("tight", 10, 25, {800.0}, 10.0),
    };
    return BatchSimulation(cfg, jobs);
  };
  auto s1 = make();
  auto s2 = make();
  const auto& a = s1.run();
  const auto& b = s2.run();

  REQUIRE(a.jobs.size() == b.jobs.size());
  for (std::size_t i = 0; i < a.jobs.size(); ++i) {
    CHECK(a.jobs[i].job_id == b.jobs[i].job_id);
    CHECK(a.jobs[i].finish == b.jobs[i].finish);
    CHECK(a.jobs[i].mean_cores == b.jobs[i].mean_cores);
  }
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].time == b.samples[i].time);
    CHECK(a.samples[i].series == b.samples[i].series);
    CHECK(a.samples[i].value == b.samples[i].value);
  }
}
