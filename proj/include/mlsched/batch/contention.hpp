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
#ifndef MLSCHED_BATCH_CONTENTION_HPP
#define MLSCHED_BATCH_CONTENTION_HPP

#include <cstdint>
#include <vector>

namespace mlsched::batch {

enum class ContentionStrategy { Edf, Proportional };

/// One executor's core demand as seen by its node's arbitration step.
struct CoreDemand {
  std::int64_t executor = 0;  // stable id, used to break deadline ties
  double cores = 0.0;
  double deadline = 0.0;  // absolute deadline of the owning job
};

/// Node-level contention resolution. When the demands fit, they pass
/// through unchanged. EDF grants full demands in ascending deadline order
/// (ties by executor id); the first demand that no longer fits gets the
/// remainder and everything after it gets zero. Proportional scales every
/// demand by capacity / sum. The grants are aligned with `demands` and
/// never sum to more than the capacity.
std::vector<double> resolve_contention(const std::vector<CoreDemand>& demands,
                                       double capacity,
                                       ContentionStrategy strategy);

}  // namespace mlsched::batch

#endif  // MLSCHED_BATCH_CONTENTION_HPP
