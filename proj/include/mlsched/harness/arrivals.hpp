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
#ifndef MLSCHED_HARNESS_ARRIVALS_HPP
#define MLSCHED_HARNESS_ARRIVALS_HPP

#include <random>
#include <vector>

#include "mlsched/sim/time.hpp"

namespace mlsched::harness {

/// One service's workload generator. Poisson holds a constant rate; Ramp
/// sweeps the rate linearly over the horizon; Burst alternates between
/// base_rate and burst_rate with duty-cycle `duty` every `period` seconds;
/// Explicit replays a fixed timestamp list.
struct ArrivalSpec {
  enum class Kind { Explicit, Poisson, Ramp, Burst };
  Kind kind = Kind::Poisson;

  std::vector<sim::SimTime> times;  // Explicit

  double rate = 0.0;  // Poisson, events per second

  double start_rate = 0.0;  // Ramp
  double end_rate = 0.0;

  double base_rate = 0.0;  // Burst
  double burst_rate = 0.0;
  double period = 0.0;
  double duty = 0.0;  // fraction of each period spent at burst_rate

  void validate() const;
};

/// Generates the arrival timestamps in [0, horizon), deterministic given
/// the stream state. Poisson and Burst draw exact exponential gaps per
/// constant-rate segment; Ramp thins a max-rate process. A zero rate
/// yields no arrivals; Explicit returns its list verbatim (clipped to the
/// horizon).
std::vector<sim::SimTime> gen_arrivals(const ArrivalSpec& spec, std::mt19937_64& stream,
                                       sim::SimTime horizon);

}  // namespace mlsched::harness

#endif  // MLSCHED_HARNESS_ARRIVALS_HPP
