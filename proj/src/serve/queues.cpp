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
#include "mlsched/serve/queues.hpp"

namespace mlsched::serve {

double risk(const QueuedRequest& head, const InferenceService& svc, sim::SimTime now) {
  return (now - head.arrival + svc.gpu_time) / svc.sla_rt;
}

int gpu_pick(const ServiceQueues& queues, const std::vector<InferenceService>& services,
             sim::SimTime now) {
  int best = -1;
  double best_risk = 0.0;
  for (int s = 0; s < queues.service_count(); ++s) {
    const auto& q = queues.queue(s);
    if (q.empty()) continue;
    double r = risk(q.front(), services.at(s), now);
    if (best < 0 || r > best_risk) {
      best = s;
      best_risk = r;
    }
  }
  return best;
}

int gpu_pick_fifo(const ServiceQueues& queues) {
  int best = -1;
  sim::SimTime best_arrival = 0.0;
  for (int s = 0; s < queues.service_count(); ++s) {
    const auto& q = queues.queue(s);
    if (q.empty()) continue;
    if (best < 0 || q.front().arrival < best_arrival) {
      best = s;
      best_arrival = q.front().arrival;
    }
  }
  return best;
}

int cpu_pick(const std::vector<bool>& eligible, int& rr_last) {
  int m = static_cast<int>(eligible.size());
  for (int i = 1; i <= m; ++i) {
    int s = (rr_last + i) % m;
    if (eligible[s]) {
      rr_last = s;
      return s;
    }
  }
  return -1;
}

}  // namespace mlsched::serve
