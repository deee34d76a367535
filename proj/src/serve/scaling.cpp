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
#include "mlsched/serve/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mlsched/batch/contention.hpp"

namespace mlsched::serve {

ProvisionLayout provision_layout(const std::vector<InferenceService>& services,
                                 const sim::NodeSpec& node) {
  node.validate();
  if (services.empty())
    throw std::invalid_argument("provision_layout: at least one service required");
  ProvisionLayout layout;
  double split = node.cores / static_cast<double>(services.size());
  for (int s = 0; s < static_cast<int>(services.size()); ++s)
    layout.cpu.push_back(ProvisionLayout::CpuSlot{s, split});
  layout.gpu_executors = node.gpus;
  return layout;
}

double percentile_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values[rank - 1];
}

double aggregate_rt(const std::vector<double>& rts, SlaAggregator aggregator) {
  if (rts.empty()) return 0.0;
  if (aggregator == SlaAggregator::Max) return *std::max_element(rts.begin(), rts.end());
  return percentile_nearest_rank(rts, 0.95);
}

double vscale_step(control::PiControllerState& pi, double current_grant,
                   const WindowStats& stats, double sla_rt, double setpoint_frac) {
  if (stats.completed == 0) return std::max(pi.u_min, 0.95 * current_grant);
  double error = (stats.agg_rt - setpoint_frac * sla_rt) / sla_rt;
  return control::pi_step(pi, current_grant, error, 1.0 - stats.gpu_share);
}

std::vector<double> supervise(const std::vector<double>& demands, double node_cores) {
  std::vector<batch::CoreDemand> d;
  d.reserve(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i)
    d.push_back(batch::CoreDemand{static_cast<std::int64_t>(i), demands[i], 0.0});
  return batch::resolve_contention(d, node_cores, batch::ContentionStrategy::Proportional);
}

std::vector<sim::WindowRecord> measure_sla(const std::vector<sim::RequestRecord>& requests,
                                           const std::vector<InferenceService>& services,
                                           sim::SimTime horizon) {
  std::map<std::string, int> index;
  for (int s = 0; s < static_cast<int>(services.size()); ++s) index[services[s].id] = s;

  std::vector<std::vector<const sim::RequestRecord*>> by_service(services.size());
  for (const auto& r : requests) by_service.at(index.at(r.service)).push_back(&r);

  std::vector<sim::WindowRecord> out;
  for (std::size_t s = 0; s < services.size(); ++s) {
    const auto& svc = services[s];
    double w = svc.window;
    sim::SimTime max_finish = 0.0;
    for (const auto* r : by_service[s]) max_finish = std::max(max_finish, r->finish);
    // Last boundary covers the horizon and strictly clears every completion
    // (a finish exactly on a boundary belongs to the next window).
    std::int64_t last = static_cast<std::int64_t>(std::ceil(horizon / w));
    while (static_cast<double>(last) * w <= max_finish) ++last;
    for (std::int64_t k = 0; k < last; ++k) {
      double lo = static_cast<double>(k) * w;
      double hi = static_cast<double>(k + 1) * w;
      std::vector<double> rts;
      for (const auto* r : by_service[s])
        if (r->finish >= lo && r->finish < hi) rts.push_back(r->response_time());
      double agg = aggregate_rt(rts, svc.aggregator);
      bool violated = !rts.empty() && agg > svc.sla_rt;
      out.push_back(sim::WindowRecord{svc.id, lo, agg, violated, 0.0});
    }
  }
  return out;
}

}  // namespace mlsched::serve
