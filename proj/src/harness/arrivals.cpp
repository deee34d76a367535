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
#include "mlsched/harness/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mlsched/harness/random.hpp"

namespace mlsched::harness {

void ArrivalSpec::validate() const {
  switch (kind) {
    case Kind::Explicit: {
      sim::SimTime prev = 0.0;
      for (sim::SimTime t : times) {
        if (t < prev)
          throw std::invalid_argument(
              "arrival spec: explicit times must be non-decreasing and non-negative");
        prev = t;
      }
      break;
    }
    case Kind::Poisson:
      if (rate < 0.0) throw std::invalid_argument("arrival spec: rate must be >= 0");
      break;
    case Kind::Ramp:
      if (start_rate < 0.0 || end_rate < 0.0)
        throw std::invalid_argument("arrival spec: ramp rates must be >= 0");
      break;
    case Kind::Burst:
      if (base_rate < 0.0 || burst_rate < 0.0)
        throw std::invalid_argument("arrival spec: burst rates must be >= 0");
      if (period <= 0.0) throw std::invalid_argument("arrival spec: period must be > 0");
      if (duty < 0.0 || duty > 1.0)
        throw std::invalid_argument("arrival spec: duty must be in [0, 1]");
      break;
  }
}

namespace {

/// Exact sampling of a constant-rate segment, appending arrivals until the
/// process leaves [t, seg_end). Memorylessness makes restarting at each
/// boundary with a fresh gap exact.
void fill_segment(std::vector<sim::SimTime>& out, std::mt19937_64& rng, double rate,
                  sim::SimTime t, sim::SimTime seg_end) {
  if (rate <= 0.0) return;
  for (;;) {
    t += exponential(rng, rate);
    if (t >= seg_end) return;
    out.push_back(t);
  }
}

}  // namespace

std::vector<sim::SimTime> gen_arrivals(const ArrivalSpec& spec, std::mt19937_64& stream,
                                       sim::SimTime horizon) {
  spec.validate();
  std::vector<sim::SimTime> out;
  switch (spec.kind) {
    case ArrivalSpec::Kind::Explicit:
      for (sim::SimTime t : spec.times)
        if (t < horizon) out.push_back(t);
      break;
    case ArrivalSpec::Kind::Poisson:
      fill_segment(out, stream, spec.rate, 0.0, horizon);
      break;
    case ArrivalSpec::Kind::Ramp: {
      double max_rate = std::max(spec.start_rate, spec.end_rate);
      if (max_rate <= 0.0) break;
      sim::SimTime t = 0.0;
      for (;;) {
        t += exponential(stream, max_rate);
        if (t >= horizon) break;
        double rate_t = spec.start_rate + (spec.end_rate - spec.start_rate) * (t / horizon);
        if (u01(stream) * max_rate < rate_t) out.push_back(t);
      }
      break;
    }
    case ArrivalSpec::Kind::Burst: {
      for (std::int64_t k = 0;; ++k) {
        sim::SimTime seg_start = static_cast<double>(k) * spec.period;
        if (seg_start >= horizon) break;
        sim::SimTime split = std::min(seg_start + spec.duty * spec.period, horizon);
        sim::SimTime seg_end = std::min(seg_start + spec.period, horizon);
        fill_segment(out, stream, spec.burst_rate, seg_start, split);
        fill_segment(out, stream, spec.base_rate, split, seg_end);
      }
      break;
    }
  }
  return out;
}

}  // namespace mlsched::harness
