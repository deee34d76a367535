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
#ifndef MLSCHED_SERVE_SIM_HPP
#define MLSCHED_SERVE_SIM_HPP

#include <cstdint>
#include <deque>
#include <vector>

#include "mlsched/control/pi.hpp"
#include "mlsched/serve/queues.hpp"
#include "mlsched/serve/scaling.hpp"
#include "mlsched/serve/service.hpp"
#include "mlsched/sim/cluster.hpp"
#include "mlsched/sim/engine.hpp"

namespace mlsched::serve {

enum class ServingPolicy { Roma, Rules };

struct ServingSimConfig {
  std::vector<sim::NodeSpec> nodes;
  std::vector<InferenceService> services;
  ServingPolicy policy = ServingPolicy::Roma;
  sim::SimTime duration = 0.0;  // arrivals and control stop here; stragglers drain

  double kp = 2.0;
  double ki = 0.5;
  double setpoint_frac = 0.8;    // response-time setpoint as a fraction of sla_rt
  double scaler_floor = 0.25;    // vertical scaler u_min, cores
  double rule_step = 0.5;        // competitor grant increment, cores
  double rule_floor = 0.5;       // competitor grant floor, cores
  double gateway_latency = 0.0;  // fixed routing delay, seconds

  void validate() const;
};

/// Post-run bookkeeping the property suites assert on. Breach counters stay
/// zero on a correct run; they exist so tests observe every event boundary
/// without instrumenting the simulation from outside.
struct ServingAudit {
  std::uint64_t arrivals = 0;
  std::uint64_t completions = 0;
  std::uint64_t gpu_conservation_breaches = 0;  // idle GPU with a non-empty queue
  double max_grant_overshoot = 0.0;             // max of (sum of node grants - cores)
};

/// Trace-driven serving simulation: per-service gateway queues, one
/// CPU-bound executor per (service, node) plus one GPU-bound executor per
/// physical GPU, window-driven vertical scaling with a per-node supervisor,
/// and the rule-based competitor behind the same plumbing. Single-shot:
/// build, run(), read the log.
class ServingSimulation {
 public:
  /// `arrivals[s]` holds service s's request timestamps, non-decreasing.
  ServingSimulation(ServingSimConfig config, std::vector<std::vector<sim::SimTime>> arrivals);

  /// Runs until every request is served and returns the metrics log.
  const sim::MetricsLog& run();

  const sim::MetricsLog& log() const { return engine_.log(); }
  const ServingAudit& audit() const { return audit_; }

 private:
  struct CpuExecRt {
    int node = 0;
    int service = 0;
    double grant = 0.0;
    double demand = 0.0;  // persisted scaler output, re-supervised each round
    control::PiControllerState pi;
    std::int64_t serving = -1;  // live request index, -1 when idle
    double work_left = 0.0;     // core-seconds
    sim::SimTime last_update = 0.0;
    std::uint64_t event_gen = 0;  // invalidates stale completion events
  };

  struct GpuExecRt {
    int node = 0;
    std::int64_t serving = -1;
  };

  struct LiveRequest {
    QueuedRequest req;
    sim::SimTime start = 0.0;
    sim::DeviceKind device = sim::DeviceKind::Cpu;
  };

  struct Completion {
    sim::SimTime finish = 0.0;
    double rt = 0.0;
    sim::DeviceKind device = sim::DeviceKind::Cpu;
  };

  int service_count() const { return static_cast<int>(cfg_.services.size()); }
  CpuExecRt& cpu_exec(int service, int node) { return cpu_execs_[node * service_count() + service]; }
  double service_grant(int service) const;

  void dispatch();
  void start_gpu(std::size_t gpu_index, QueuedRequest req);
  void start_cpu(std::size_t exec_index, QueuedRequest req);
  void integrate_cpu(CpuExecRt& e);
  void reschedule_cpu(std::size_t exec_index);
  void complete_cpu(std::size_t exec_index);
  void complete_gpu(std::size_t gpu_index);
  void record_completion(const LiveRequest& live);

  void window_round(int service);
  WindowStats drain_window(int service, sim::SimTime boundary, std::vector<double>* rts);
  void apply_roma_round(int service, const WindowStats& stats);
  void apply_rules_round(int service, const std::vector<double>& rts);
  void apply_node_grants(int node, const std::vector<double>& grants);
  void set_cpu_grant(std::size_t exec_index, double grant);
  void audit_event_boundary();

  ServingSimConfig cfg_;
  std::vector<std::vector<sim::SimTime>> arrivals_;
  sim::SimEngine engine_;
  ServiceQueues queues_;
  std::vector<CpuExecRt> cpu_execs_;  // node-major, one per (node, service)
  std::vector<GpuExecRt> gpu_execs_;
  std::vector<LiveRequest> live_;
  std::vector<int> live_by_service_;
  std::vector<std::deque<Completion>> window_buf_;  // completions not yet attributed
  std::vector<std::int64_t> window_k_;              // next window boundary index
  int rr_last_ = -1;
  ServingAudit audit_;
  bool ran_ = false;
};

/// One-shot convenience wrapper.
sim::MetricsLog run_serving(ServingSimConfig config,
                            std::vector<std::vector<sim::SimTime>> arrivals,
                            ServingAudit* audit = nullptr);

}  // namespace mlsched::serve

#endif  // MLSCHED_SERVE_SIM_HPP
