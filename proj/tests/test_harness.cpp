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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mlsched/harness/arrivals.hpp"
#include "mlsched/harness/export.hpp"
#include "mlsched/harness/random.hpp"
#include "mlsched/harness/runner.hpp"
#include "mlsched/harness/scenario.hpp"

using namespace mlsched;
using namespace mlsched::harness;
using nlohmann::json;

namespace {

std::filesystem::path scenario_dir() {
  if (const char* env = std::getenv("MLSCHED_SCENARIOS")) return env;
  return "scenarios";
}

std::string validation_message(const json& j) {
  try {
    parse_scenario(j);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("fnv1a64 matches the reference constants") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 12638187200555641996ULL);
}

TEST_CASE("named streams are stable and name-dependent") {
  auto a1 = named_stream(99, "arrivals");
  auto a2 = named_stream(99, "arrivals");
  auto b = named_stream(99, "noise");
  CHECK(a1() == a2());
  CHECK(a1() == a2());
  auto c1 = named_stream(99, "arrivals");
  auto d = named_stream(100, "arrivals");
  CHECK(c1() != b());
  CHECK(named_stream(99, "arrivals")() != d());
}

TEST_CASE("consuming one stream does not perturb another") {
  auto a = named_stream(7, "serving.arrivals");
  for (int i = 0; i < 1000; ++i) (void)u01(a);
  auto fresh = named_stream(7, "fed.noise");
  auto isolated = named_stream(7, "fed.noise");
  for (int i = 0; i < 10; ++i) CHECK(fresh() == isolated());
}

TEST_CASE("u01 stays in the half-open unit interval") {
  auto rng = named_stream(1, "u");
  for (int i = 0; i < 100000; ++i) {
    const double u = u01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("exponential draws have the configured mean") {
  auto rng = named_stream(2, "e");
  const double rate = 2.0;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += exponential(rng, rate);
  const double mean = sum / n;
  // sd of the sample mean is 1/(rate*sqrt(n)) ~ 0.0016; allow 5 sigma.
  CHECK(mean == doctest::Approx(0.5).epsilon(0.016));
  CHECK_THROWS_AS(exponential(rng, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian draws have the configured moments") {
  auto rng = named_stream(3, "g");
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = gaussian(rng, 1.0, 2.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.04));
  CHECK(var == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("zero-rate traces produce no arrivals") {
  auto rng = named_stream(1, "a");
  ArrivalSpec p;
  p.kind = ArrivalSpec::Kind::Poisson;
  p.rate = 0.0;
  CHECK(gen_arrivals(p, rng, 100.0).empty());

  ArrivalSpec b;
  b.kind = ArrivalSpec::Kind::Burst;
  b.base_rate = 0.0;
  b.burst_rate = 0.0;
  b.period = 10.0;
  b.duty = 0.5;
  CHECK(gen_arrivals(b, rng, 100.0).empty());

  ArrivalSpec r;
  r.kind = ArrivalSpec::Kind::Ramp;
  CHECK(gen_arrivals(r, rng, 100.0).empty());
}

TEST_CASE("explicit traces replay verbatim and clip to the horizon") {
  auto rng = named_stream(1, "a");
  ArrivalSpec spec;
  spec.kind = ArrivalSpec::Kind::Explicit;
  spec.times = {1.0, 2.0, 3.0, 250.0};
  auto ts = gen_arrivals(spec, rng, 100.0);
  CHECK(ts == std::vector<sim::SimTime>{1.0, 2.0, 3.0});
}

TEST_CASE("poisson counts concentrate around rate times horizon") {
  auto rng = named_stream(7, "a");
  ArrivalSpec spec;
  spec.kind = ArrivalSpec::Kind::Poisson;
  spec.rate = 10.0;
  auto ts = gen_arrivals(spec, rng, 100.0);
  // mean 1000, sd ~ 32; the band is over 6 sigma wide.
  CHECK(ts.size() > 800);
  CHECK(ts.size() < 1200);
  CHECK(std::is_sorted(ts.begin(), ts.end()));
  CHECK(ts.front() >= 0.0);
  CHECK(ts.back() < 100.0);
}

TEST_CASE("burst traces concentrate arrivals inside the burst windows") {
  auto rng = named_stream(3, "a");
  ArrivalSpec spec;
  spec.kind = ArrivalSpec::Kind::Burst;
  spec.base_rate = 2.0;
  spec.burst_rate = 40.0;
  spec.period = 10.0;
  spec.duty = 0.3;
  auto ts = gen_arrivals(spec, rng, 1000.0);
  CHECK(std::is_sorted(ts.begin(), ts.end()));
  // per period: 40*3 + 2*7 = 134 expected, 13400 over 100 periods, sd ~ 116.
  CHECK(ts.size() > 12800);
  CHECK(ts.size() < 14000);
  std::size_t in_burst = 0;
  for (double t : ts)
    if (std::fmod(t, spec.period) < spec.duty * spec.period) ++in_burst;
  // burst windows carry 120/134 ~ 0.9 of the mass.
  CHECK(double(in_burst) / double(ts.size()) > 0.8);
}

TEST_CASE("ramp traces shift mass toward the high-rate end") {
  auto rng = named_stream(4, "a");
  ArrivalSpec spec;
  spec.kind = ArrivalSpec::Kind::Ramp;
  spec.start_rate = 0.0;
  spec.end_rate = 20.0;
  auto ts = gen_arrivals(spec, rng, 100.0);
  // integral of the rate is 1000; sd ~ 32.
  CHECK(ts.size() > 800);
  CHECK(ts.size() < 1200);
  CHECK(std::is_sorted(ts.begin(), ts.end()));
  std::size_t late = 0;
  for (double t : ts)
    if (t >= 50.0) ++late;
  // the second half carries 750 of the expected 1000 arrivals.
  CHECK(double(late) / double(ts.size()) > 0.65);
}

TEST_CASE("identical stream states reproduce a trace exactly") {
  ArrivalSpec spec;
  spec.kind = ArrivalSpec::Kind::Burst;
  spec.base_rate = 3.0;
  spec.burst_rate = 12.0;
  spec.period = 60.0;
  spec.duty = 0.3;
  auto a = named_stream(42, "serve.arrivals.svc");
  auto b = named_stream(42, "serve.arrivals.svc");
  auto t1 = gen_arrivals(spec, a, 300.0);
  auto t2 = gen_arrivals(spec, b, 300.0);
  CHECK(t1 == t2);
  auto c = named_stream(43, "serve.arrivals.svc");
  CHECK(gen_arrivals(spec, c, 300.0) != t1);
}

TEST_CASE("arrival specs reject out-of-range parameters") {
  ArrivalSpec p;
  p.kind = ArrivalSpec::Kind::Poisson;
  p.rate = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  ArrivalSpec b;
  b.kind = ArrivalSpec::Kind::Burst;
  b.base_rate = 1.0;
  b.burst_rate = 1.0;
  b.period = 0.0;
  b.duty = 0.5;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b.period = 10.0;
  b.duty = 1.5;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);

  ArrivalSpec e;
  e.kind = ArrivalSpec::Kind::Explicit;
  e.times = {2.0, 1.0};
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
}

TEST_CASE("batch scenarios fill documented defaults") {
  json j = json::parse(R"({
    "kind": "batch",
    "policy": {"id": "edf"},
    "cluster": [{"id": "n0", "cores": 8}],
    "workload": {"jobs": [
      {"id": "j0", "deadline": 100,
       "stages": [{"id": 0, "records": 1000, "rate": 10}]}
    ]}
  })");
  auto cfg = parse_scenario(j);
  CHECK(cfg.kind == ScenarioKind::Batch);
  CHECK(cfg.seed == 1);
  CHECK(cfg.replicates == 1);
  CHECK(cfg.batch.policy == batch::BatchPolicy::DynaEdf);
  CHECK(cfg.batch.control_period == 1.0);
  CHECK(cfg.batch.kp == 2.0);
  CHECK(cfg.batch.ki == 0.5);
  CHECK(cfg.batch.cores_per_executor == 4.0);
  CHECK(cfg.batch.deadline_margin == 0.0);
  REQUIRE(cfg.batch.cluster.size() == 1);
  CHECK(cfg.batch.cluster[0].memory_gb == 32.0);
  CHECK(cfg.batch.cluster[0].gpus == 0);
  REQUIRE(cfg.jobs.size() == 1);
  CHECK(cfg.jobs[0].submit_time == 0.0);
  CHECK(cfg.jobs[0].memory_request == 8.0);
  REQUIRE(cfg.jobs[0].dag.size() == 1);
  CHECK(cfg.jobs[0].dag[0].deps.empty());
  CHECK(cfg.jobs[0].dag[0].shuffle_cost == 0.0);
}

TEST_CASE("validation errors name the offending key") {
  json good = json::parse(R"({
    "kind": "batch",
    "policy": {"id": "edf"},
    "cluster": [{"id": "n0", "cores": 8}],
    "workload": {"jobs": [
      {"id": "j0", "deadline": 100,
       "stages": [{"id": 0, "records": 1000, "rate": 10}]}
    ]}
  })");

  json bad = good;
  bad["workload"]["jobs"][0]["deadline"] = -5;
  CHECK(validation_message(bad) == "workload.jobs[0].deadline: must be > 0");

  bad = good;
  bad["policy"]["id"] = "slurm";
  CHECK(validation_message(bad) ==
        "policy.id: unknown id 'slurm' (valid: fifo, edf, proportional)");

  bad = good;
  bad["workload"]["jobs"][0]["dealine"] = 100;
  CHECK(validation_message(bad) == "workload.jobs[0]: unknown key 'dealine'");

  bad = good;
  bad["kind"] = "interactive";
  CHECK(validation_message(bad) ==
        "scenario.kind: unknown kind 'interactive' (valid: batch, federation, serving)");

  bad = good;
  bad["cluster"][0]["cores"] = 0;
  CHECK(validation_message(bad).find("cluster[0]") != std::string::npos);

  bad = good;
  bad["workload"]["jobs"][0]["stages"] = json::array();
  CHECK(validation_message(bad) == "workload.jobs[0].stages: must not be empty");
}

TEST_CASE("serving scenarios reject bad aggregators and trace kinds") {
  json good = json::parse(R"({
    "kind": "serving",
    "policy": {"id": "roma"},
    "cluster": [{"id": "n0", "cores": 4, "gpus": 1}],
    "duration": 60,
    "workload": {"services": [
      {"id": "s0", "sla_rt": 0.4, "aggregator": "max",
       "cpu_time_1core": 0.1, "gpu_time": 0.02,
       "arrivals": {"kind": "poisson", "rate": 5}}
    ]}
  })");
  CHECK_NOTHROW(parse_scenario(good));

  json bad = good;
  bad["workload"]["services"][0]["aggregator"] = "p50";
  CHECK(validation_message(bad) ==
        "workload.services[0].aggregator: unknown aggregator 'p50' (valid: max, p95)");

  bad = good;
  bad["workload"]["services"][0]["arrivals"]["kind"] = "weibull";
  CHECK(validation_message(bad) ==
        "workload.services[0].arrivals.kind: unknown kind 'weibull' "
        "(valid: poisson, ramp, burst, explicit)");
}

TEST_CASE("bundled scenarios round-trip through their JSON image") {
  for (const char* name : {"batch_deadlines.json", "fed_accuracy.json", "serving_slas.json"}) {
    CAPTURE(name);
    auto cfg = load_scenario((scenario_dir() / name).string());
    json j1 = scenario_to_json(cfg);
    json j2 = scenario_to_json(parse_scenario(j1));
    CHECK(j1 == j2);
  }
}

TEST_CASE("file-level problems raise ParseError") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ParseError);
  auto tmp = std::filesystem::temp_directory_path() / "mlsched_bad_scenario.json";
  {
    std::ofstream out(tmp);
    out << "{not json";
  }
  CHECK_THROWS_AS(load_scenario(tmp.string()), ParseError);
  std::filesystem::remove(tmp);
}

TEST_CASE("floats render with nine significant digits") {
  CHECK(format_float(0.0) == "0");
  CHECK(format_float(1.0) == "1");
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(1.0 / 3.0) == "0.333333333");
  CHECK(format_float(123456789.0) == "123456789");
  CHECK(format_float(1234567891.0) == "1.23456789e+09");
  CHECK(format_float(-2.5) == "-2.5");
}

TEST_CASE("job rows render to the pinned CSV layout") {
  sim::JobRecord r;
  r.job_id = "job-a";
  r.submit = 0.0;
  r.deadline_abs = 300.0;
  r.finish = 287.5;
  r.violated = false;
  r.mean_cores = 12.25;
  CHECK(jobs_csv({r}) ==
        "job_id,submit,deadline_abs,finish,violated,mean_cores\n"
        "job-a,0,300,287.5,0,12.25\n");
}

TEST_CASE("round rows leave the target empty on bootstrap rounds") {
  sim::RoundRecord r0;
  r0.round = 1;
  r0.epochs = 1;
  r0.cumulative_epochs = 1;
  r0.ac_fit = 0.25;
  r0.ac_eval = 0.24;
  sim::RoundRecord r1;
  r1.round = 3;
  r1.has_target = true;
  r1.target = 0.5;
  r1.epochs = 4;
  r1.cumulative_epochs = 6;
  r1.ac_fit = 0.55;
  r1.ac_eval = 0.54;
  CHECK(rounds_csv({r0, r1}) ==
        "r,target,e_r,s_r,ac_fit,ac_eval\n"
        "1,,1,1,0.25,0.24\n"
        "3,0.5,4,6,0.55,0.54\n");
}

TEST_CASE("window rows render violations as 0/1 flags") {
  sim::WindowRecord a{"svc", 0.0, 0.31, false, 2.0};
  sim::WindowRecord b{"svc", 5.0, 0.62, true, 2.5};
  CHECK(windows_csv({a, b}) ==
        "service,window_start,agg_rt,violated,cores\n"
        "svc,0,0.31,0,2\n"
        "svc,5,0.62,1,2.5\n");
}

TEST_CASE("fields containing separators are quoted") {
  sim::Sample s{1.5, "cores:svc,\"x\"", 2.0};
  CHECK(samples_csv({s}) ==
        "time,series,value\n"
        "1.5,\"cores:svc,\"\"x\"\"\",2\n");
}

TEST_CASE("atomic_write creates parents and leaves no temp file") {
  auto dir = std::filesystem::temp_directory_path() / "mlsched_export_test";
  std::filesystem::remove_all(dir);
  auto path = dir / "a" / "b.csv";
  atomic_write(path.string(), "x,y\n1,2\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "x,y\n1,2\n");
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical seeds reproduce a serving run; different seeds differ") {
  json j = json::parse(R"({
    "kind": "serving",
    "policy": {"id": "roma"},
    "cluster": [{"id": "n0", "cores": 4, "gpus": 1}],
    "duration": 60,
    "workload": {"services": [
      {"id": "s0", "sla_rt": 0.4, "aggregator": "max",
       "cpu_time_1core": 0.1, "gpu_time": 0.02,
       "arrivals": {"kind": "poisson", "rate": 6}},
      {"id": "s1", "sla_rt": 0.3, "aggregator": "p95",
       "cpu_time_1core": 0.08, "gpu_time": 0.02,
       "arrivals": {"kind": "burst", "base_rate": 4, "burst_rate": 12,
                    "period": 20, "duty": 0.3}}
    ]}
  })");
  auto cfg = parse_scenario(j);
  auto a = run_scenario(cfg, 5);
  auto b = run_scenario(cfg, 5);
  CHECK(requests_csv(a.log.requests) == requests_csv(b.log.requests));
  CHECK(windows_csv(a.log.windows) == windows_csv(b.log.windows));
  CHECK(samples_csv(a.log.samples) == samples_csv(b.log.samples));
  auto c = run_scenario(cfg, 6);
  CHECK(requests_csv(c.log.requests) != requests_csv(a.log.requests));
}

TEST_CASE("federation runs are reproducible per seed") {
  auto cfg = load_scenario((scenario_dir() / "fed_accuracy.json").string());
  auto a = run_scenario(cfg, 3);
  auto b = run_scenario(cfg, 3);
  CHECK(rounds_csv(a.log.rounds) == rounds_csv(b.log.rounds));
  auto c = run_scenario(cfg, 4);
  CHECK(rounds_csv(c.log.rounds) != rounds_csv(a.log.rounds));
}

TEST_CASE("summaries carry per-run blocks and an aggregate") {
  auto cfg = load_scenario((scenario_dir() / "batch_deadlines.json").string());
  auto runs = run_replicates(cfg);
  REQUIRE(runs.size() == 1);
  json s = build_summary(cfg, runs);
  CHECK(s["kind"] == "batch");
  CHECK(s["policy"] == "proportional");
  CHECK(s["runs"].size() == 1);
  CHECK(s["aggregate"]["violations"] == 0);
  REQUIRE(s["runs"][0]["jobs"].size() == 3);
  for (const auto& job : s["runs"][0]["jobs"]) {
    CHECK(job["budget_frac"].get<double>() > 0.0);
    CHECK(job["budget_frac"].get<double>() <= 1.0);
  }
}
