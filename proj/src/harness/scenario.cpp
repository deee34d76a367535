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
#include "mlsched/harness/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>

namespace mlsched::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ValidationError(where + ": " + msg);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& where, const char* key) {
  const json* v = find(obj, key);
  if (v == nullptr) fail(where, std::string("missing required key '") + key + "'");
  return *v;
}

void check_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "must be an object");
}

const json& get_array(const json& obj, const std::string& where, const char* key) {
  const json& v = require(obj, where, key);
  if (!v.is_array()) fail(where + "." + key, "must be an array");
  return v;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

double get_num(const json& obj, const std::string& where, const char* key,
               std::optional<double> def = std::nullopt) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (def) return *def;
    fail(where, std::string("missing required key '") + key + "'");
  }
  if (!v->is_number()) fail(where + "." + key, "must be a number");
  return v->get<double>();
}

std::int64_t get_int(const json& obj, const std::string& where, const char* key,
                     std::optional<std::int64_t> def = std::nullopt) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (def) return *def;
    fail(where, std::string("missing required key '") + key + "'");
  }
  if (!v->is_number_integer()) fail(where + "." + key, "must be an integer");
  return v->get<std::int64_t>();
}

std::string get_str(const json& obj, const std::string& where, const char* key) {
  const json& v = require(obj, where, key);
  if (!v.is_string()) fail(where + "." + key, "must be a string");
  return v.get<std::string>();
}

/// Re-throws a domain type's invalid_argument with the json location.
template <typename Fn>
void checked(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

std::vector<sim::NodeSpec> parse_cluster(const json& root, const std::string& rootw) {
  const json& arr = get_array(root, rootw, "cluster");
  if (arr.empty()) fail(rootw + ".cluster", "must not be empty");
  std::vector<sim::NodeSpec> nodes;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string where = rootw + ".cluster[" + std::to_string(i) + "]";
    const json& n = arr[i];
    check_object(n, where);
    check_keys(n, where, {"id", "cores", "memory_gb", "gpus"});
    sim::NodeSpec spec;
    spec.id = get_str(n, where, "id");
    spec.cores = get_num(n, where, "cores");
    spec.memory_gb = get_num(n, where, "memory_gb", 32.0);
    spec.gpus = static_cast<int>(get_int(n, where, "gpus", 0));
    if (!ids.insert(spec.id).second) fail(where + ".id", "duplicate node id '" + spec.id + "'");
    checked(where, [&] { spec.validate(); });
    nodes.push_back(std::move(spec));
  }
  return nodes;
}

void parse_batch(const json& j, ScenarioConfig& cfg) {
  check_keys(j, "scenario", {"kind", "seed", "replicates", "policy", "cluster", "workload"});

  const json& pol = require(j, "scenario", "policy");
  check_object(pol, "policy");
  check_keys(pol, "policy",
             {"id", "control_period", "kp", "ki", "cores_per_executor",
              "max_executors_per_stage", "profiling_error", "deadline_margin"});
  std::string id = get_str(pol, "policy", "id");
  if (id == "fifo")
    cfg.batch.policy = batch::BatchPolicy::Fifo;
  else if (id == "edf")
    cfg.batch.policy = batch::BatchPolicy::DynaEdf;
  else if (id == "proportional")
    cfg.batch.policy = batch::BatchPolicy::DynaProportional;
  else
    fail("policy.id", "unknown id '" + id + "' (valid: fifo, edf, proportional)");
  cfg.batch.control_period = get_num(pol, "policy", "control_period", 1.0);
  cfg.batch.kp = get_num(pol, "policy", "kp", 2.0);
  cfg.batch.ki = get_num(pol, "policy", "ki", 0.5);
  cfg.batch.cores_per_executor = get_num(pol, "policy", "cores_per_executor", 4.0);
  cfg.batch.max_executors_per_stage =
      static_cast<int>(get_int(pol, "policy", "max_executors_per_stage", 0));
  cfg.batch.profiling_error = get_num(pol, "policy", "profiling_error", 0.0);
  cfg.batch.deadline_margin = get_num(pol, "policy", "deadline_margin", 0.0);
  if (cfg.batch.control_period <= 0.0) fail("policy.control_period", "must be > 0");
  if (cfg.batch.kp < 0.0) fail("policy.kp", "must be >= 0");
  if (cfg.batch.ki < 0.0) fail("policy.ki", "must be >= 0");
  if (cfg.batch.cores_per_executor <= 0.0) fail("policy.cores_per_executor", "must be > 0");
  if (cfg.batch.max_executors_per_stage < 0) fail("policy.max_executors_per_stage", "must be >= 0");
  if (cfg.batch.profiling_error <= -1.0) fail("policy.profiling_error", "must be > -1");
  if (cfg.batch.deadline_margin < 0.0 || cfg.batch.deadline_margin >= 1.0)
    fail("policy.deadline_margin", "must be in [0, 1)");

  cfg.batch.cluster = parse_cluster(j, "scenario");

  const json& wl = require(j, "scenario", "workload");
  check_object(wl, "workload");
  check_keys(wl, "workload", {"jobs"});
  const json& jobs = get_array(wl, "workload", "jobs");
  if (jobs.empty()) fail("workload.jobs", "must not be empty");
  std::set<std::string> job_ids;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string where = "workload.jobs[" + std::to_string(i) + "]";
    const json& job = jobs[i];
    check_object(job, where);
    check_keys(job, where, {"id", "submit", "deadline", "memory_gb", "stages"});
    batch::BatchJob b;
    b.id = get_str(job, where, "id");
    if (b.id.empty()) fail(where + ".id", "must not be empty");
    if (!job_ids.insert(b.id).second) fail(where + ".id", "duplicate job id '" + b.id + "'");
    b.submit_time = get_num(job, where, "submit", 0.0);
    if (b.submit_time < 0.0) fail(where + ".submit", "must be >= 0");
    b.deadline = get_num(job, where, "deadline");
    if (b.deadline <= 0.0) fail(where + ".deadline", "must be > 0");
    b.memory_request = get_num(job, where, "memory_gb", 8.0);
    if (b.memory_request < 0.0) fail(where + ".memory_gb", "must be >= 0");
    const json& stages = get_array(job, where, "stages");
    if (stages.empty()) fail(where + ".stages", "must not be empty");
    for (std::size_t s = 0; s < stages.size(); ++s) {
      std::string sw = where + ".stages[" + std::to_string(s) + "]";
      const json& st = stages[s];
      check_object(st, sw);
      check_keys(st, sw, {"id", "deps", "records", "rate", "shuffle"});
      batch::StageSpec spec;
      spec.stage_id = static_cast<int>(get_int(st, sw, "id"));
      if (const json* deps = find(st, "deps")) {
        if (!deps->is_array()) fail(sw + ".deps", "must be an array");
        for (const json& d : *deps) {
          if (!d.is_number_integer()) fail(sw + ".deps", "must contain integers");
          spec.deps.push_back(d.get<int>());
        }
      }
      spec.records = get_num(st, sw, "records");
      if (spec.records <= 0.0) fail(sw + ".records", "must be > 0");
      spec.true_rate = get_num(st, sw, "rate");
      if (spec.true_rate <= 0.0) fail(sw + ".rate", "must be > 0");
      spec.shuffle_cost = get_num(st, sw, "shuffle", 0.0);
      if (spec.shuffle_cost < 0.0) fail(sw + ".shuffle", "must be >= 0");
      b.dag.push_back(std::move(spec));
    }
    checked(where, [&] { b.validate(); });
    cfg.jobs.push_back(std::move(b));
  }
}

void parse_federation(const json& j, ScenarioConfig& cfg) {
  check_keys(j, "scenario", {"kind", "seed", "replicates", "policy", "workload"});

  const json& pol = require(j, "scenario", "policy");
  check_object(pol, "policy");
  check_keys(pol, "policy",
             {"id", "rounds", "ac_sla", "e_bootstrap", "e_max", "epoch_duration", "sync_delay"});
  std::string id = get_str(pol, "policy", "id");
  if (id == "linear")
    cfg.fed.trajectory = fed::Trajectory::Linear;
  else if (id == "quadratic")
    cfg.fed.trajectory = fed::Trajectory::Quadratic;
  else
    fail("policy.id", "unknown id '" + id + "' (valid: linear, quadratic)");
  cfg.fed.rounds = static_cast<int>(get_int(pol, "policy", "rounds", 10));
  cfg.fed.ac_sla = get_num(pol, "policy", "ac_sla", 0.8);
  cfg.fed.e_bootstrap = static_cast<int>(get_int(pol, "policy", "e_bootstrap", 1));
  cfg.fed.e_max = static_cast<int>(get_int(pol, "policy", "e_max", 16));
  cfg.fed.epoch_duration = get_num(pol, "policy", "epoch_duration", 1.0);
  cfg.fed.sync_delay = get_num(pol, "policy", "sync_delay", 1.0);

  const json& wl = require(j, "scenario", "workload");
  check_object(wl, "workload");
  check_keys(wl, "workload", {"nodes", "a_max", "k", "noise_sd", "eval_gap", "jitter"});
  cfg.oracle.nodes = static_cast<int>(get_int(wl, "workload", "nodes", 8));
  cfg.oracle.a_max = get_num(wl, "workload", "a_max", 0.85);
  cfg.oracle.k = get_num(wl, "workload", "k", 0.21);
  cfg.oracle.noise_sd = get_num(wl, "workload", "noise_sd", 0.0);
  cfg.oracle.eval_gap = get_num(wl, "workload", "eval_gap", 0.01);
  cfg.oracle.jitter = get_num(wl, "workload", "jitter", 0.0);
  if (cfg.oracle.nodes < 1) fail("workload.nodes", "must be >= 1");
  if (cfg.oracle.a_max <= 0.0 || cfg.oracle.a_max > 1.0) fail("workload.a_max", "must be in (0, 1]");
  if (cfg.oracle.k <= 0.0) fail("workload.k", "must be > 0");
  if (cfg.oracle.noise_sd < 0.0) fail("workload.noise_sd", "must be >= 0");
  if (cfg.oracle.eval_gap < 0.0 || cfg.oracle.eval_gap >= cfg.oracle.a_max)
    fail("workload.eval_gap", "must be in [0, a_max)");
  if (cfg.oracle.jitter < 0.0 || cfg.oracle.jitter >= 1.0)
    fail("workload.jitter", "must be in [0, 1)");

  cfg.fed.node_count = cfg.oracle.nodes;
  checked("policy", [&] { cfg.fed.validate(); });
}

ArrivalSpec parse_arrivals(const json& a, const std::string& where) {
  check_object(a, where);
  ArrivalSpec spec;
  std::string kind = get_str(a, where, "kind");
  if (kind == "poisson") {
    check_keys(a, where, {"kind", "rate"});
    spec.kind = ArrivalSpec::Kind::Poisson;
    spec.rate = get_num(a, where, "rate");
  } else if (kind == "ramp") {
    check_keys(a, where, {"kind", "start_rate", "end_rate"});
    spec.kind = ArrivalSpec::Kind::Ramp;
    spec.start_rate = get_num(a, where, "start_rate");
    spec.end_rate = get_num(a, where, "end_rate");
  } else if (kind == "burst") {
    check_keys(a, where, {"kind", "base_rate", "burst_rate", "period", "duty"});
    spec.kind = ArrivalSpec::Kind::Burst;
    spec.base_rate = get_num(a, where, "base_rate");
    spec.burst_rate = get_num(a, where, "burst_rate");
    spec.period = get_num(a, where, "period");
    spec.duty = get_num(a, where, "duty");
  } else if (kind == "explicit") {
    check_keys(a, where, {"kind", "times"});
    spec.kind = ArrivalSpec::Kind::Explicit;
    const json& times = get_array(a, where, "times");
    for (const json& t : times) {
      if (!t.is_number()) fail(where + ".times", "must contain numbers");
      spec.times.push_back(t.get<double>());
    }
  } else {
    fail(where + ".kind", "unknown kind '" + kind +
                              "' (valid: poisson, ramp, burst, explicit)");
  }
  checked(where, [&] { spec.validate(); });
  return spec;
}

void parse_serving(const json& j, ScenarioConfig& cfg) {
  check_keys(j, "scenario",
             {"kind", "seed", "replicates", "policy", "cluster", "duration", "workload"});

  const json& pol = require(j, "scenario", "policy");
  check_object(pol, "policy");
  check_keys(pol, "policy",
             {"id", "kp", "ki", "setpoint_frac", "scaler_floor", "rule_step", "rule_floor",
              "gateway_latency"});
  std::string id = get_str(pol, "policy", "id");
  if (id == "roma")
    cfg.serving.policy = serve::ServingPolicy::Roma;
  else if (id == "rules")
    cfg.serving.policy = serve::ServingPolicy::Rules;
  else
    fail("policy.id", "unknown id '" + id + "' (valid: roma, rules)");
  cfg.serving.kp = get_num(pol, "policy", "kp", 2.0);
  cfg.serving.ki = get_num(pol, "policy", "ki", 0.5);
  cfg.serving.setpoint_frac = get_num(pol, "policy", "setpoint_frac", 0.8);
  cfg.serving.scaler_floor = get_num(pol, "policy", "scaler_floor", 0.25);
  cfg.serving.rule_step = get_num(pol, "policy", "rule_step", 0.5);
  cfg.serving.rule_floor = get_num(pol, "policy", "rule_floor", 0.5);
  cfg.serving.gateway_latency = get_num(pol, "policy", "gateway_latency", 0.0);

  cfg.serving.nodes = parse_cluster(j, "scenario");
  cfg.serving.duration = get_num(j, "scenario", "duration");

  const json& wl = require(j, "scenario", "workload");
  check_object(wl, "workload");
  check_keys(wl, "workload", {"services"});
  const json& services = get_array(wl, "workload", "services");
  if (services.empty()) fail("workload.services", "must not be empty");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < services.size(); ++i) {
    std::string where = "workload.services[" + std::to_string(i) + "]";
    const json& s = services[i];
    check_object(s, where);
    check_keys(s, where,
               {"id", "sla_rt", "window", "aggregator", "cpu_time_1core", "gpu_time", "arrivals"});
    serve::InferenceService svc;
    svc.id = get_str(s, where, "id");
    if (svc.id.empty()) fail(where + ".id", "must not be empty");
    if (!ids.insert(svc.id).second) fail(where + ".id", "duplicate service id '" + svc.id + "'");
    svc.sla_rt = get_num(s, where, "sla_rt");
    svc.window = get_num(s, where, "window", 5.0);
    std::string agg = get_str(s, where, "aggregator");
    if (agg == "max")
      svc.aggregator = serve::SlaAggregator::Max;
    else if (agg == "p95")
      svc.aggregator = serve::SlaAggregator::P95;
    else
      fail(where + ".aggregator", "unknown aggregator '" + agg + "' (valid: max, p95)");
    svc.cpu_time_1core = get_num(s, where, "cpu_time_1core");
    svc.gpu_time = get_num(s, where, "gpu_time");
    checked(where, [&] { svc.validate(); });
    cfg.serving.services.push_back(std::move(svc));
    cfg.traces.push_back(parse_arrivals(require(s, where, "arrivals"), where + ".arrivals"));
  }
  checked("scenario", [&] { cfg.serving.validate(); });
}

json cluster_to_json(const std::vector<sim::NodeSpec>& nodes) {
  json arr = json::array();
  for (const auto& n : nodes)
    arr.push_back({{"id", n.id}, {"cores", n.cores}, {"memory_gb", n.memory_gb}, {"gpus", n.gpus}});
  return arr;
}

json arrivals_to_json(const ArrivalSpec& a) {
  switch (a.kind) {
    case ArrivalSpec::Kind::Poisson:
      return {{"kind", "poisson"}, {"rate", a.rate}};
    case ArrivalSpec::Kind::Ramp:
      return {{"kind", "ramp"}, {"start_rate", a.start_rate}, {"end_rate", a.end_rate}};
    case ArrivalSpec::Kind::Burst:
      return {{"kind", "burst"},
              {"base_rate", a.base_rate},
              {"burst_rate", a.burst_rate},
              {"period", a.period},
              {"duty", a.duty}};
    case ArrivalSpec::Kind::Explicit:
    default:
      return {{"kind", "explicit"}, {"times", a.times}};
  }
}

}  // namespace

const char* kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Batch:
      return "batch";
    case ScenarioKind::Federation:
      return "federation";
    case ScenarioKind::Serving:
    default:
      return "serving";
  }
}

std::string ScenarioConfig::policy_id() const {
  switch (kind) {
    case ScenarioKind::Batch:
      switch (batch.policy) {
        case batch::BatchPolicy::Fifo:
          return "fifo";
        case batch::BatchPolicy::DynaEdf:
          return "edf";
        case batch::BatchPolicy::DynaProportional:
        default:
          return "proportional";
      }
    case ScenarioKind::Federation:
      return fed.trajectory == fed::Trajectory::Linear ? "linear" : "quadratic";
    case ScenarioKind::Serving:
    default:
      return serving.policy == serve::ServingPolicy::Roma ? "roma" : "rules";
  }
}

ScenarioConfig parse_scenario(const json& j) {
  check_object(j, "scenario");
  ScenarioConfig cfg;

  std::string kind = get_str(j, "scenario", "kind");
  if (kind == "batch")
    cfg.kind = ScenarioKind::Batch;
  else if (kind == "federation")
    cfg.kind = ScenarioKind::Federation;
  else if (kind == "serving")
    cfg.kind = ScenarioKind::Serving;
  else
    fail("scenario.kind", "unknown kind '" + kind + "' (valid: batch, federation, serving)");

  std::int64_t seed = get_int(j, "scenario", "seed", 1);
  if (seed < 0) fail("scenario.seed", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.replicates = static_cast<int>(get_int(j, "scenario", "replicates", 1));
  if (cfg.replicates < 1) fail("scenario.replicates", "must be >= 1");

  switch (cfg.kind) {
    case ScenarioKind::Batch:
      parse_batch(j, cfg);
      break;
    case ScenarioKind::Federation:
      parse_federation(j, cfg);
      break;
    case ScenarioKind::Serving:
      parse_serving(j, cfg);
      break;
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_scenario(j);
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["kind"] = kind_name(cfg.kind);
  j["seed"] = cfg.seed;
  j["replicates"] = cfg.replicates;

  switch (cfg.kind) {
    case ScenarioKind::Batch: {
      j["policy"] = {{"id", cfg.policy_id()},
                     {"control_period", cfg.batch.control_period},
                     {"kp", cfg.batch.kp},
                     {"ki", cfg.batch.ki},
                     {"cores_per_executor", cfg.batch.cores_per_executor},
                     {"max_executors_per_stage", cfg.batch.max_executors_per_stage},
                     {"profiling_error", cfg.batch.profiling_error},
                     {"deadline_margin", cfg.batch.deadline_margin}};
      j["cluster"] = cluster_to_json(cfg.batch.cluster);
      json jobs = json::array();
      for (const auto& b : cfg.jobs) {
        json stages = json::array();
        for (const auto& s : b.dag)
          stages.push_back({{"id", s.stage_id},
                            {"deps", s.deps},
                            {"records", s.records},
                            {"rate", s.true_rate},
                            {"shuffle", s.shuffle_cost}});
        jobs.push_back({{"id", b.id},
                        {"submit", b.submit_time},
                        {"deadline", b.deadline},
                        {"memory_gb", b.memory_request},
                        {"stages", stages}});
      }
      j["workload"] = {{"jobs", jobs}};
      break;
    }
    case ScenarioKind::Federation: {
      j["policy"] = {{"id", cfg.policy_id()},
                     {"rounds", cfg.fed.rounds},
                     {"ac_sla", cfg.fed.ac_sla},
                     {"e_bootstrap", cfg.fed.e_bootstrap},
                     {"e_max", cfg.fed.e_max},
                     {"epoch_duration", cfg.fed.epoch_duration},
                     {"sync_delay", cfg.fed.sync_delay}};
      j["workload"] = {{"nodes", cfg.oracle.nodes},     {"a_max", cfg.oracle.a_max},
                       {"k", cfg.oracle.k},             {"noise_sd", cfg.oracle.noise_sd},
                       {"eval_gap", cfg.oracle.eval_gap}, {"jitter", cfg.oracle.jitter}};
      break;
    }
    case ScenarioKind::Serving: {
      j["policy"] = {{"id", cfg.policy_id()},
                     {"kp", cfg.serving.kp},
                     {"ki", cfg.serving.ki},
                     {"setpoint_frac", cfg.serving.setpoint_frac},
                     {"scaler_floor", cfg.serving.scaler_floor},
                     {"rule_step", cfg.serving.rule_step},
                     {"rule_floor", cfg.serving.rule_floor},
                     {"gateway_latency", cfg.serving.gateway_latency}};
      j["cluster"] = cluster_to_json(cfg.serving.nodes);
      j["duration"] = cfg.serving.duration;
      json services = json::array();
      for (std::size_t i = 0; i < cfg.serving.services.size(); ++i) {
        const auto& s = cfg.serving.services[i];
        services.push_back(
            {{"id", s.id},
             {"sla_rt", s.sla_rt},
             {"window", s.window},
             {"aggregator", s.aggregator == serve::SlaAggregator::Max ? "max" : "p95"},
             {"cpu_time_1core", s.cpu_time_1core},
             {"gpu_time", s.gpu_time},
             {"arrivals", arrivals_to_json(cfg.traces[i])}});
      }
      j["workload"] = {{"services", services}};
      break;
    }
  }
  return j;
}

}  // namespace mlsched::harness
