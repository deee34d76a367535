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
#ifndef MLSCHED_SIM_CLUSTER_HPP
#define MLSCHED_SIM_CLUSTER_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mlsched::sim {

/// A physical machine in the simulated cluster. Cores are fractional
/// core-units shared by vertical scaling; GPUs are whole devices.
struct NodeSpec {
  std::string id;
  double cores = 0.0;
  double memory_gb = 0.0;
  int gpus = 0;

  void validate() const {
    if (cores <= 0.0) throw std::invalid_argument("node '" + id + "': cores must be > 0");
    if (memory_gb <= 0.0) throw std::invalid_argument("node '" + id + "': memory must be > 0");
    if (gpus < 0) throw std::invalid_argument("node '" + id + "': gpus must be >= 0");
  }
};

enum class DeviceKind { Cpu, Gpu };

inline const char* device_name(DeviceKind d) { return d == DeviceKind::Cpu ? "cpu" : "gpu"; }

/// Bookkeeping shared by every executor flavour. CPU-bound executors hold a
/// fractional core grant; GPU-bound executors map 1:1 to a physical device.
struct ExecutorState {
  std::string id;
  int node = 0;  // index into the cluster's node list
  DeviceKind device = DeviceKind::Cpu;
  double granted_cores = 0.0;
  double granted_memory = 0.0;
  bool busy = false;
};

inline double total_cores(const std::vector<NodeSpec>& nodes) {
  double c = 0.0;
  for (const auto& n : nodes) c += n.cores;
  return c;
}

inline double total_memory(const std::vector<NodeSpec>& nodes) {
  double m = 0.0;
  for (const auto& n : nodes) m += n.memory_gb;
  return m;
}

}  // namespace mlsched::sim

#endif  // MLSCHED_SIM_CLUSTER_HPP
