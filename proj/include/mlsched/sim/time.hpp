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
#ifndef MLSCHED_SIM_TIME_HPP
#define MLSCHED_SIM_TIME_HPP

namespace mlsched::sim {

/// Simulated seconds. The engine guarantees it never decreases.
using SimTime = double;

/// Absolute tolerance used by capacity-safety and completion checks.
inline constexpr double kCapacityEps = 1e-9;

}  // namespace mlsched::sim

#endif  // MLSCHED_SIM_TIME_HPP
