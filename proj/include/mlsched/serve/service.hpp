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
#ifndef MLSCHED_SERVE_SERVICE_HPP
#define MLSCHED_SERVE_SERVICE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mlsched/sim/cluster.hpp"

namespace mlsched::serve {

/// How response times inside one measurement window collapse to the single
/// number compared against the SLA bound.
enum class SlaAggregator { Max, P95 };

/// A served model with a response-time SLA. Service times are deterministic:
/// `cpu_time_1core` seconds on one full core (scaling inversely with the
/// granted share) or `gpu_time` seconds on a whole GPU.
struct InferenceService {
  std::string id;
  double sla_rt = 0.0;    // response-time bound, seconds
  double window = 0.0;    // measurement window length, seconds
  SlaAggregator aggregator = SlaAggregator::Max;
  double cpu_time_1core = 0.0;
  double gpu_time = 0.0;

  void validate() const {
    if (sla_rt <= 0.0) throw std::invalid_argument("service '" + id + "': sla_rt must be > 0");
    if (window <= 0.0) throw std::invalid_argument("service '" + id + "': window must be > 0");
    if (cpu_time_1core <= 0.0)
      throw std::invalid_argument("service '" + id + "': cpu_time_1core must be > 0");
    if (gpu_time <= 0.0) throw std::invalid_argument("service '" + id + "': gpu_time must be > 0");
    if (gpu_time > cpu_time_1core)
      throw std::invalid_argument("service '" + id + "': gpu_time must not exceed cpu_time_1core");
  }
};

/// Nearest-rank percentile of `values` (q in (0, 1]); 0 when empty.
double percentile_nearest_rank(std::vector<double> values, double q);

/// Collapses one window's response times per the aggregator; 0 when empty.
double aggregate_rt(const std::vector<double>& rts, SlaAggregator aggregator);

/// Executor layout for one node: one CPU-bound executor per service (each
/// holding that service's model, cores split equally at start) plus one
/// GPU-bound executor per physical GPU (each holding every model).
struct ProvisionLayout {
  struct CpuSlot {
    int service = 0;
    double grant = 0.0;
  };
  std::vector<CpuSlot> cpu;
  int gpu_executors = 0;
};

ProvisionLayout provision_layout(const std::vector<InferenceService>& services,
                                 const sim::NodeSpec& node);

}  // namespace mlsched::serve

#endif  // MLSCHED_SERVE_SERVICE_HPP
