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
#ifndef MLSCHED_SIM_ENGINE_HPP
#define MLSCHED_SIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "mlsched/sim/metrics.hpp"
#include "mlsched/sim/time.hpp"

namespace mlsched::sim {

enum class EventKind {
  JobSubmit,
  StageComplete,
  PartitionComplete,
  ControlTick,
  RequestArrival,
  RequestComplete,
  RoundComplete,
  Custom,
};

/// Queue entry metadata. Events dequeue in (time, insertion sequence)
/// order, so equal timestamps are FIFO.
struct EventRecord {
  SimTime time = 0.0;
  EventKind kind = EventKind::Custom;
  std::uint64_t seq = 0;
};

/// Single-threaded deterministic event loop. All model state lives in the
/// policies; the engine only orders their callbacks and owns the metrics
/// log. Scheduling an event in the past is a policy bug and throws.
class SimEngine {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  void schedule(SimTime time, EventKind kind, Action action);

  /// Processes every event with time <= end, then advances the clock to
  /// `end`. Events strictly after `end` stay queued.
  MetricsLog& run_until(SimTime end);

  /// Drains the queue completely. The clock stops at the last event.
  MetricsLog& run_all();

  /// Starts the periodic control loop if it is not already running. The
  /// first tick fires one period after the call; after each tick the
  /// callback reports whether any controlled entity is still active, and
  /// the chain stops when it returns false.
  void start_tick_loop(double period, std::function<bool(SimTime)> on_tick);

  std::uint64_t ticks_fired() const { return ticks_fired_; }
  bool tick_loop_running() const { return tick_running_; }

  MetricsLog& log() { return log_; }
  const MetricsLog& log() const { return log_; }

 private:
  struct Pending {
    EventRecord rec;
    Action action;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.rec.time != b.rec.time) return a.rec.time > b.rec.time;
      return a.rec.seq > b.rec.seq;
    }
  };

  void schedule_tick();

  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t ticks_fired_ = 0;
  double tick_period_ = 0.0;
  bool tick_running_ = false;
  std::function<bool(SimTime)> on_tick_;
  MetricsLog log_;
};

}  // namespace mlsched::sim

#endif  // MLSCHED_SIM_ENGINE_HPP
