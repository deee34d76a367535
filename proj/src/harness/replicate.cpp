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
#include "mlsched/harness/replicate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlsched/harness/export.hpp"

namespace mlsched::harness {

namespace {

std::string fmt2(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

sim::MetricsLog run_batch_policy(ScenarioConfig cfg, batch::BatchPolicy policy) {
  cfg.batch.policy = policy;
  return run_scenario(cfg, cfg.seed).log;
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<CheckResult> replicate_batch(const ScenarioConfig& cfg) {
  auto fifo = run_batch_policy(cfg, batch::BatchPolicy::Fifo);
  auto edf = run_batch_policy(cfg, batch::BatchPolicy::DynaEdf);
  auto prop = run_batch_policy(cfg, batch::BatchPolicy::DynaProportional);

  const auto tightest = std::min_element(
      fifo.jobs.begin(), fifo.jobs.end(),
      [](const auto& a, const auto& b) { return a.deadline_abs < b.deadline_abs; });

  std::vector<CheckResult> checks;
  {
    CheckResult c{"fifo misses the tightest deadline", false, ""};
    c.pass = tightest->violated;
    c.detail = "job " + tightest->job_id + " finished at " + fmt2(tightest->finish) +
               " vs deadline " + fmt2(tightest->deadline_abs);
    checks.push_back(c);
  }
  {
    CheckResult c{"fifo holds slack on the other jobs", true, ""};
    for (const auto& r : fifo.jobs) {
      if (r.job_id == tightest->job_id) continue;
      double frac = (r.finish - r.submit) / (r.deadline_abs - r.submit);
      if (r.violated || frac >= 0.7) c.pass = false;
      c.detail += (c.detail.empty() ? "" : ", ") + r.job_id + "=" + fmt2(frac) + " of budget";
    }
    checks.push_back(c);
  }
  for (const auto* pair : {&edf, &prop}) {
    const char* name = pair == &edf ? "edf meets every deadline" : "proportional meets every deadline";
    CheckResult c{name, true, ""};
    for (const auto& r : pair->jobs) {
      if (r.violated) c.pass = false;
      c.detail += (c.detail.empty() ? "" : ", ") + r.job_id + "=" + fmt2(r.finish) + "/" +
                  fmt2(r.deadline_abs);
    }
    checks.push_back(c);
  }
  {
    CheckResult c{"proportional finishes close to the deadlines", true, ""};
    for (const auto& r : prop.jobs) {
      double frac = r.finish / r.deadline_abs;
      if (frac < 0.85 || frac > 1.0) c.pass = false;
      c.detail += (c.detail.empty() ? "" : ", ") + r.job_id + "=" + fmt2(frac) + " of deadline";
    }
    checks.push_back(c);
  }
  return checks;
}

std::vector<CheckResult> replicate_federation(const ScenarioConfig& cfg) {
  const int n = cfg.replicates;
  const int need_quad = static_cast<int>(std::ceil(0.9 * n));
  const int need_lin = static_cast<int>(std::ceil(0.8 * n));
  const double sla = cfg.fed.ac_sla;

  int quad_hits = 0;
  int lin_hits = 0;
  bool bootstrap_ok = true;
  for (auto trajectory : {fed::Trajectory::Quadratic, fed::Trajectory::Linear}) {
    ScenarioConfig variant = cfg;
    variant.fed.trajectory = trajectory;
    for (const auto& run : run_replicates(variant)) {
      const auto& rounds = run.log.rounds;
      for (int b = 0; b < 2 && b < static_cast<int>(rounds.size()); ++b)
        if (rounds[b].has_target || rounds[b].epochs != cfg.fed.e_bootstrap) bootstrap_ok = false;
      double final_ac = rounds.back().ac_eval;
      if (trajectory == fed::Trajectory::Quadratic) {
        if (final_ac >= sla) ++quad_hits;
      } else {
        if (final_ac >= sla - 0.10 && final_ac < sla) ++lin_hits;
      }
    }
  }

  std::vector<CheckResult> checks;
  checks.push_back({"bootstrap rounds run the fixed epoch count without a target", bootstrap_ok,
                    "both trajectories, all seeds"});
  checks.push_back({"quadratic trajectory reaches the accuracy target",
                    quad_hits >= need_quad,
                    std::to_string(quad_hits) + "/" + std::to_string(n) + " seeds (need " +
                        std::to_string(need_quad) + ")"});
  checks.push_back({"linear trajectory lands just under the target", lin_hits >= need_lin,
                    std::to_string(lin_hits) + "/" + std::to_string(n) + " seeds (need " +
                        std::to_string(need_lin) + ")"});
  return checks;
}

ServingReplication replicate_serving(const ScenarioConfig& cfg) {
  ServingReplication out;
  ScenarioConfig rules = cfg;
  rules.serving.policy = serve::ServingPolicy::Rules;
  out.rules = run_replicates(rules);
  ScenarioConfig roma = cfg;
  roma.serving.policy = serve::ServingPolicy::Roma;
  out.roma = run_replicates(roma);

  int rules_total = 0;
  int roma_total = 0;
  double rules_cores = 0.0;
  double roma_cores = 0.0;
  std::string per_seed;
  for (std::size_t i = 0; i < out.rules.size(); ++i) {
    int rv = count_violated_windows(out.rules[i].log);
    int pv = count_violated_windows(out.roma[i].log);
    rules_total += rv;
    roma_total += pv;
    rules_cores += serving_mean_cores(out.rules[i].log);
    roma_cores += serving_mean_cores(out.roma[i].log);
    per_seed += (per_seed.empty() ? "" : " ") + std::to_string(rv) + ":" + std::to_string(pv);
  }
  const double n = static_cast<double>(out.rules.size());
  rules_cores /= n;
  roma_cores /= n;

  out.checks.push_back({"rule baseline accumulates violation windows",
                        rules_total >= 10 * static_cast<int>(n),
                        "mean " + fmt2(rules_total / n) + " per seed (need >= 10); rules:roma " +
                            per_seed});
  out.checks.push_back({"roma at least halves the baseline's violation windows",
                        roma_total * 2 <= rules_total,
                        std::to_string(roma_total) + " vs " + std::to_string(rules_total) +
                            " windows"});
  out.checks.push_back({"roma uses no more cores than the baseline", roma_cores <= rules_cores,
                        fmt2(roma_cores) + " vs " + fmt2(rules_cores) + " mean cores"});
  return out;
}

std::vector<CheckResult> run_replication(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::Batch:
      return replicate_batch(cfg);
    case ScenarioKind::Federation:
      return replicate_federation(cfg);
    case ScenarioKind::Serving:
    default:
      return replicate_serving(cfg).checks;
  }
}

}  // namespace mlsched::harness
