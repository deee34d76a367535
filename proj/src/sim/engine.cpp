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
#include "mlsched/sim/engine.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace mlsched::sim {

void SimEngine::schedule(SimTime time, EventKind kind, Action action) {
  if (time < now_) {
    throw std::logic_error("schedule: event time " + std::to_string(time) +
                           " precedes current time " + std::to_string(now_));
  }
  queue_.push(Pending{EventRecord{time, kind, next_seq_++}, std::move(action)});
}

MetricsLog& SimEngine::run_until(SimTime end) {
  while (!queue_.empty() && queue_.top().rec.time <= end) {
    // priority_queue::top is const; move out via const_cast before pop.
    Pending ev = std::move(const_cast<Pending&>(queue_.top()));
    queue_.pop();
    now_ = ev.rec.time;
    if (ev.action) ev.action();
  }
  if (end > now_) now_ = end;
  return log_;
}

MetricsLog& SimEngine::run_all() {
  while (!queue_.empty()) {
    Pending ev = std::move(const_cast<Pending&>(queue_.top()));
    queue_.pop();
    now_ = ev.rec.time;
    if (ev.action) ev.action();
  }
  return log_;
}

void SimEngine::start_tick_loop(double period, std::function<bool(SimTime)> on_tick) {
  if (period <= 0.0) throw std::invalid_argument("tick period must be > 0");
  tick_period_ = period;
  on_tick_ = std::move(on_tick);
  if (!tick_running_) {
    tick_running_ = true;
    schedule_tick();
  }
}

void SimEngine::schedule_tick() {
  schedule(now_ + tick_period_, EventKind::ControlTick, [this] {
    ++ticks_fired_;
    bool active = on_tick_ ? on_tick_(now_) : false;
    if (active) {
      schedule_tick();
    } else {
      tick_running_ = false;
    }
  });
}

}  // namespace mlsched::sim
