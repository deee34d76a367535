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
#ifndef MLSCHED_BATCH_CONTROLLER_HPP
#define MLSCHED_BATCH_CONTROLLER_HPP

#include "mlsched/control/pi.hpp"

namespace mlsched::batch {

/// What the per-executor progress controller sees at a control round.
struct StageExecutorView {
  double assigned_records = 0.0;   // records this executor must process
  double processed_records = 0.0;  // records done so far
  double profiled_rate = 0.0;      // records per second per core
  double stage_start = 0.0;        // when this executor started its partition
  double proc_deadline = 0.0;      // local deadline minus the shuffle tail
};

/// One progress-control round for one executor. Compares the fraction of
/// elapsed budget against the fraction of processed records, feeds the
/// difference through the PI loop on top of a feedforward term sized so a
/// perfectly on-track executor holds a constant core count. Past the
/// processing deadline the demand saturates at the controller maximum.
double control_step(control::PiControllerState& pi, const StageExecutorView& view,
                    double now);

}  // namespace mlsched::batch

#endif  // MLSCHED_BATCH_CONTROLLER_HPP
