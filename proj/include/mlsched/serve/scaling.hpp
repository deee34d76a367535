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
#ifndef MLSCHED_SERVE_SCALING_HPP
#define MLSCHED_SERVE_SCALING_HPP

#include <vector>

#include "mlsched/control/pi.hpp"
#include "mlsched/serve/service.hpp"
#include "mlsched/sim/metrics.hpp"

namespace mlsched::serve {

/// One service's completions inside one measurement window.
struct WindowStats {
  int completed = 0;
  double agg_rt = 0.0;     // aggregated response time per the service's SLA
  double gpu_share = 0.0;  // fraction of the completions served on GPU
};

/// GPU-aware vertical scaling step for one (service, node) executor.
/// Tracks the response time toward setpoint_frac * sla_rt; the proportional
/// term is discounted by (1 - gpu_share) so improvements bought by GPU
/// offload do not scale the CPU grant down. An empty window bypasses the
/// controller and decays the demand by 5% toward pi.u_min.
double vscale_step(control::PiControllerState& pi, double current_grant,
                   const WindowStats& stats, double sla_rt, double setpoint_frac = 0.8);

/// Node supervisor: proportional scale-down of CPU demands that exceed the
/// node's capacity; demands that fit pass through unchanged.
std::vector<double> supervise(const std::vector<double>& demands, double node_cores);

/// Offline per-window SLA measurement over a completed run: tumbling
/// windows aligned at multiples of each service's window length, covering
/// [0, horizon) extended to the last completion. `cores` is left 0; the
/// simulation fills it when it logs windows online.
std::vector<sim::WindowRecord> measure_sla(const std::vector<sim::RequestRecord>& requests,
                                           const std::vector<InferenceService>& services,
                                           sim::SimTime horizon);

}  // namespace mlsched::serve

#endif  // MLSCHED_SERVE_SCALING_HPP
