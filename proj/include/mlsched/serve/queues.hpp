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
#ifndef MLSCHED_SERVE_QUEUES_HPP
#define MLSCHED_SERVE_QUEUES_HPP

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "mlsched/serve/service.hpp"
#include "mlsched/sim/time.hpp"

namespace mlsched::serve {

struct UnknownService : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A request waiting at the gateway. `service` indexes the scenario's
/// service list.
struct QueuedRequest {
  std::uint64_t id = 0;
  int service = 0;
  sim::SimTime arrival = 0.0;
};

/// Per-service FIFO queues held at the master gateway.
class ServiceQueues {
 public:
  explicit ServiceQueues(int service_count) : queues_(service_count) {}

  void enqueue(const QueuedRequest& req) {
    if (req.service < 0 || req.service >= service_count())
      throw UnknownService("no registered service with index " + std::to_string(req.service));
    queues_[req.service].push_back(req);
  }

  QueuedRequest pop(int service) {
    QueuedRequest head = queues_.at(service).front();
    queues_[service].pop_front();
    return head;
  }

  const std::deque<QueuedRequest>& queue(int service) const { return queues_.at(service); }
  int service_count() const { return static_cast<int>(queues_.size()); }

  bool all_empty() const {
    for (const auto& q : queues_)
      if (!q.empty()) return false;
    return true;
  }

 private:
  std::vector<std::deque<QueuedRequest>> queues_;
};

/// Violation risk of serving `head` next on a GPU: predicted response time
/// (wait so far plus GPU service time) relative to the SLA bound.
double risk(const QueuedRequest& head, const InferenceService& svc, sim::SimTime now);

/// Risk-greedy GPU dispatch: the non-empty queue whose head is most likely
/// to violate its SLA, ties to the lowest service index. -1 when all queues
/// are empty. Call only with an idle GPU at hand.
int gpu_pick(const ServiceQueues& queues, const std::vector<InferenceService>& services,
             sim::SimTime now);

/// Merged-FIFO GPU dispatch used by the rule-based competitor: the head
/// with the earliest arrival across all queues, ties to the lowest service
/// index. -1 when all queues are empty.
int gpu_pick_fifo(const ServiceQueues& queues);

/// Round-robin CPU dispatch over the eligibility mask, cycling from one
/// past the previous pick. Picks advance `rr_last`; -1 (and no advance)
/// when nothing is eligible. Callers mark a service eligible when its queue
/// is non-empty and an executor holding its model is free.
int cpu_pick(const std::vector<bool>& eligible, int& rr_last);

}  // namespace mlsched::serve

#endif  // MLSCHED_SERVE_QUEUES_HPP
