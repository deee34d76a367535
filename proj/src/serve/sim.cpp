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
#include "mlsched/serve/sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mlsched::serve {

void ServingSimConfig::validate() const {
  if (nodes.empty()) throw std::invalid_argument("serving config: at least one node required");
  for (const auto& n : nodes) n.validate();
  if (services.empty())
    throw std::invalid_argument("serving config: at least one service required");
  std::set<std::string> ids;
  for (const auto& s : services) {
    s.validate();
    if (!ids.insert(s.id).second)
      throw std::invalid_argument("serving config: duplicate service id '" + s.id + "'");
  }
  if (duration <= 0.0) throw std::invalid_argument("serving config: duration must be > 0");
  if (kp < 0.0 || ki < 0.0) throw std::invalid_argument("serving config: gains must be >= 0");
  if (setpoint_frac <= 0.0 || setpoint_frac > 1.0)
    throw std::invalid_argument("serving config: setpoint_frac must be in (0, 1]");
  if (scaler_floor <= 0.0)
    throw std::invalid_argument("serving config: scaler_floor must be > 0");
  if (rule_step <= 0.0) throw std::invalid_argument("serving config: rule_step must be > 0");
  if (rule_floor <= 0.0) throw std::invalid_argument("serving config: rule_floor must be > 0");
  if (gateway_latency < 0.0)
    throw std::invalid_argument("serving config: gateway_latency must be >= 0");
}

ServingSimulation::ServingSimulation(ServingSimConfig config,
                                     std::vector<std::vector<sim::SimTime>> arrivals)
    : cfg_(std::move(config)),
      arrivals_(std::move(arrivals)),
      queues_(static_cast<int>(cfg_.services.size())) {
  cfg_.validate();
  if (arrivals_.size() != cfg_.services.size())
    throw std::invalid_argument("serving config: one arrival trace per service required");
  for (std::size_t s = 0; s < arrivals_.size(); ++s) {
    sim::SimTime prev = 0.0;
    for (sim::SimTime t : arrivals_[s]) {
      if (t < prev)
        throw std::invalid_argument("arrival trace for service '" + cfg_.services[s].id +
                                    "' must be non-decreasing and non-negative");
      prev = t;
    }
  }

  int m = service_count();
  live_by_service_.assign(m, 0);
  window_buf_.resize(m);
  window_k_.assign(m, 1);

  for (int n = 0; n < static_cast<int>(cfg_.nodes.size()); ++n) {
    const auto& node = cfg_.nodes[n];
    ProvisionLayout layout = provision_layout(cfg_.services, node);
    for (const auto& slot : layout.cpu) {
      CpuExecRt e;
      e.node = n;
      e.service = slot.service;
      e.grant = slot.grant;
      e.demand = e.grant;
      e.pi.kp = cfg_.kp;
      e.pi.ki = cfg_.ki;
      e.pi.u_min = cfg_.scaler_floor;
      e.pi.u_max = node.cores;
      e.pi.period = cfg_.services[slot.service].window;
      cpu_execs_.push_back(e);
    }
    for (int g = 0; g < layout.gpu_executors; ++g) gpu_execs_.push_back(GpuExecRt{n, -1});
  }
}

double ServingSimulation::service_grant(int service) const {
  double total = 0.0;
  for (int n = 0; n < static_cast<int>(cfg_.nodes.size()); ++n)
    total += cpu_execs_[n * service_count() + service].grant;
  return total;
}

const sim::MetricsLog& ServingSimulation::run() {
  if (ran_) return engine_.log();
  ran_ = true;

  for (int s = 0; s < service_count(); ++s) {
    for (sim::SimTime t : arrivals_[s]) {
      if (t >= cfg_.duration) break;
      engine_.schedule(t + cfg_.gateway_latency, sim::EventKind::RequestArrival, [this, s, t] {
        auto id = static_cast<std::uint64_t>(live_.size());
        live_.push_back(LiveRequest{QueuedRequest{id, s, t}, 0.0, sim::DeviceKind::Cpu});
        ++live_by_service_[s];
        ++audit_.arrivals;
        queues_.enqueue(live_.back().req);
        dispatch();
      });
    }
    engine_.schedule(cfg_.services[s].window, sim::EventKind::ControlTick,
                     [this, s] { window_round(s); });
  }
  return engine_.run_all();
}

void ServingSimulation::dispatch() {
  for (std::size_t gi = 0; gi < gpu_execs_.size(); ++gi) {
    if (gpu_execs_[gi].serving >= 0) continue;
    int s = cfg_.policy == ServingPolicy::Roma
                ? gpu_pick(queues_, cfg_.services, engine_.now())
                : gpu_pick_fifo(queues_);
    if (s < 0) break;
    start_gpu(gi, queues_.pop(s));
  }

  int m = service_count();
  std::vector<bool> eligible(m);
  for (;;) {
    bool any = false;
    for (int s = 0; s < m; ++s) {
      bool ok = false;
      if (!queues_.queue(s).empty()) {
        for (std::size_t n = 0; n < cfg_.nodes.size() && !ok; ++n)
          ok = cpu_execs_[n * m + s].serving < 0;
      }
      eligible[s] = ok;
      any = any || ok;
    }
    if (!any) break;
    int s = cpu_pick(eligible, rr_last_);
    for (std::size_t n = 0; n < cfg_.nodes.size(); ++n) {
      if (cpu_execs_[n * m + s].serving < 0) {
        start_cpu(n * m + s, queues_.pop(s));
        break;
      }
    }
  }
  audit_event_boundary();
}

void ServingSimulation::start_gpu(std::size_t gpu_index, QueuedRequest req) {
  auto& live = live_[req.id];
  live.start = engine_.now();
  live.device = sim::DeviceKind::Gpu;
  gpu_execs_[gpu_index].serving = static_cast<std::int64_t>(req.id);
  engine_.schedule(engine_.now() + cfg_.services[req.service].gpu_time,
                   sim::EventKind::RequestComplete,
                   [this, gpu_index] { complete_gpu(gpu_index); });
}

void ServingSimulation::start_cpu(std::size_t exec_index, QueuedRequest req) {
  auto& e = cpu_execs_[exec_index];
  auto& live = live_[req.id];
  live.start = engine_.now();
  live.device = sim::DeviceKind::Cpu;
  e.serving = static_cast<std::int64_t>(req.id);
  e.work_left = cfg_.services[req.service].cpu_time_1core;
  e.last_update = engine_.now();
  reschedule_cpu(exec_index);
}

void ServingSimulation::integrate_cpu(CpuExecRt& e) {
  if (e.serving >= 0) {
    e.work_left = std::max(0.0, e.work_left - e.grant * (engine_.now() - e.last_update));
  }
  e.last_update = engine_.now();
}

void ServingSimulation::reschedule_cpu(std::size_t exec_index) {
  auto& e = cpu_execs_[exec_index];
  std::uint64_t gen = ++e.event_gen;
  if (e.serving < 0) return;
  sim::SimTime finish = engine_.now() + e.work_left / e.grant;
  engine_.schedule(finish, sim::EventKind::RequestComplete, [this, exec_index, gen] {
    auto& exec = cpu_execs_[exec_index];
    if (exec.event_gen != gen || exec.serving < 0) return;
    complete_cpu(exec_index);
  });
}

void ServingSimulation::complete_cpu(std::size_t exec_index) {
  auto& e = cpu_execs_[exec_index];
  integrate_cpu(e);
  record_completion(live_[static_cast<std::size_t>(e.serving)]);
  e.serving = -1;
  ++e.event_gen;
  dispatch();
}

void ServingSimulation::complete_gpu(std::size_t gpu_index) {
  auto& g = gpu_execs_[gpu_index];
  record_completion(live_[static_cast<std::size_t>(g.serving)]);
  g.serving = -1;
  dispatch();
}

void ServingSimulation::record_completion(const LiveRequest& live) {
  const auto& svc = cfg_.services[live.req.service];
  sim::SimTime now = engine_.now();
  engine_.log().requests.push_back(sim::RequestRecord{live.req.id, svc.id, live.req.arrival,
                                                      live.start, now, live.device});
  window_buf_[live.req.service].push_back(
      Completion{now, now - live.req.arrival, live.device});
  --live_by_service_[live.req.service];
  ++audit_.completions;
}

void ServingSimulation::window_round(int service) {
  const auto& svc = cfg_.services[service];
  sim::SimTime now = engine_.now();
  sim::SimTime window_start = static_cast<double>(window_k_[service] - 1) * svc.window;

  std::vector<double> rts;
  WindowStats stats = drain_window(service, now, &rts);
  double cores_during = service_grant(service);
  bool violated = stats.completed > 0 && stats.agg_rt > svc.sla_rt;
  engine_.log().windows.push_back(
      sim::WindowRecord{svc.id, window_start, stats.agg_rt, violated, cores_during});

  if (cfg_.policy == ServingPolicy::Roma) {
    apply_roma_round(service, stats);
  } else {
    apply_rules_round(service, rts);
  }
  engine_.log().sample(now, "cores:" + svc.id, service_grant(service));
  audit_event_boundary();

  bool drained = now >= cfg_.duration - 1e-9 && queues_.queue(service).empty() &&
                 live_by_service_[service] == 0 && window_buf_[service].empty();
  if (!drained) {
    ++window_k_[service];
    engine_.schedule(static_cast<double>(window_k_[service]) * svc.window,
                     sim::EventKind::ControlTick, [this, service] { window_round(service); });
  }
}

WindowStats ServingSimulation::drain_window(int service, sim::SimTime boundary,
                                            std::vector<double>* rts) {
  WindowStats stats;
  int on_gpu = 0;
  auto& buf = window_buf_[service];
  while (!buf.empty() && buf.front().finish < boundary) {
    ++stats.completed;
    rts->push_back(buf.front().rt);
    if (buf.front().device == sim::DeviceKind::Gpu) ++on_gpu;
    buf.pop_front();
  }
  if (stats.completed > 0) {
    stats.agg_rt = aggregate_rt(*rts, cfg_.services[service].aggregator);
    stats.gpu_share = static_cast<double>(on_gpu) / stats.completed;
  }
  return stats;
}

void ServingSimulation::apply_roma_round(int service, const WindowStats& stats) {
  int m = service_count();
  for (std::size_t n = 0; n < cfg_.nodes.size(); ++n) {
    auto& e = cpu_execs_[n * m + service];
    e.demand = vscale_step(e.pi, e.grant, stats, cfg_.services[service].sla_rt,
                           cfg_.setpoint_frac);
  }
  for (std::size_t n = 0; n < cfg_.nodes.size(); ++n) {
    std::vector<double> demands(m);
    for (int s = 0; s < m; ++s) demands[s] = cpu_execs_[n * m + s].demand;
    apply_node_grants(static_cast<int>(n), supervise(demands, cfg_.nodes[n].cores));
  }
}

void ServingSimulation::apply_rules_round(int service, const std::vector<double>& rts) {
  if (rts.empty()) return;
  const auto& svc = cfg_.services[service];
  double p95 = percentile_nearest_rank(rts, 0.95);
  int m = service_count();
  for (std::size_t n = 0; n < cfg_.nodes.size(); ++n) {
    std::size_t index = n * m + service;
    auto& e = cpu_execs_[index];
    if (p95 > svc.sla_rt) {
      double in_use = 0.0;
      for (int s = 0; s < m; ++s) in_use += cpu_execs_[n * m + s].grant;
      if (in_use + cfg_.rule_step <= cfg_.nodes[n].cores + 1e-9)
        set_cpu_grant(index, e.grant + cfg_.rule_step);
    } else if (p95 < 0.5 * svc.sla_rt) {
      set_cpu_grant(index, std::max(cfg_.rule_floor, e.grant - cfg_.rule_step));
    }
  }
}

void ServingSimulation::apply_node_grants(int node, const std::vector<double>& grants) {
  int m = service_count();
  for (int s = 0; s < m; ++s) set_cpu_grant(static_cast<std::size_t>(node) * m + s, grants[s]);
}

void ServingSimulation::set_cpu_grant(std::size_t exec_index, double grant) {
  auto& e = cpu_execs_[exec_index];
  if (std::abs(grant - e.grant) <= 1e-12) return;
  integrate_cpu(e);
  e.grant = grant;
  reschedule_cpu(exec_index);
}

void ServingSimulation::audit_event_boundary() {
  bool idle_gpu = false;
  for (const auto& g : gpu_execs_) idle_gpu = idle_gpu || g.serving < 0;
  if (idle_gpu && !queues_.all_empty()) ++audit_.gpu_conservation_breaches;

  int m = service_count();
  for (std::size_t n = 0; n < cfg_.nodes.size(); ++n) {
    double in_use = 0.0;
    for (int s = 0; s < m; ++s) in_use += cpu_execs_[n * m + s].grant;
    audit_.max_grant_overshoot =
        std::max(audit_.max_grant_overshoot, in_use - cfg_.nodes[n].cores);
  }
}

sim::MetricsLog run_serving(ServingSimConfig config,
                            std::vector<std::vector<sim::SimTime>> arrivals,
                            ServingAudit* audit) {
  ServingSimulation sim(std::move(config), std::move(arrivals));
  sim::MetricsLog log = sim.run();
  if (audit != nullptr) *audit = sim.audit();
  return log;
}

}  // namespace mlsched::serve
