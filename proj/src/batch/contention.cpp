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
#include "mlsched/batch/contention.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mlsched::batch {

std::vector<double> resolve_contention(const std::vector<CoreDemand>& demands,
                                       double capacity,
                                       ContentionStrategy strategy) {
  if (capacity < 0.0) throw std::invalid_argument("negative capacity");
  for (const auto& d : demands) {
    if (d.cores < 0.0) throw std::invalid_argument("negative core demand");
  }

  std::vector<double> grants(demands.size(), 0.0);
  double total = 0.0;
  for (const auto& d : demands) total += d.cores;
  if (total <= capacity) {
    for (std::size_t i = 0; i < demands.size(); ++i) grants[i] = demands[i].cores;
    return grants;
  }

  if (strategy == ContentionStrategy::Proportional) {
    const double scale = capacity / total;
    for (std::size_t i = 0; i < demands.size(); ++i) {
      grants[i] = demands[i].cores * scale;
    }
    return grants;
  }

  // EDF: earliest deadline first, ties broken by executor id so the
  // outcome does not depend on the caller's iteration order.
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (demands[a].deadline != demands[b].deadline) {
      return demands[a].deadline < demands[b].deadline;
    }
    return demands[a].executor < demands[b].executor;
  });

  double left = capacity;
  for (std::size_t idx : order) {
    if (left <= 0.0) break;
    const double take = std::min(demands[idx].cores, left);
    grants[idx] = take;
    left -= take;
  }
  return grants;
}

}  // namespace mlsched::batch
