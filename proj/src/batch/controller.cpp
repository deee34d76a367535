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
#include "mlsched/batch/controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace mlsched::batch {

double control_step(control::PiControllerState& pi, const StageExecutorView& view,
                    double now) {
  if (view.profiled_rate <= 0.0) throw std::invalid_argument("profiled_rate must be positive");

  const double remaining = view.assigned_records - view.processed_records;
  if (view.assigned_records <= 0.0 || remaining <= 0.0) return pi.u_min;

  // Out of processing budget: ask for everything the node can give.
  if (now >= view.proc_deadline) return pi.u_max;

  const double span = view.proc_deadline - view.stage_start;
  double expected = span > 0.0 ? (now - view.stage_start) / span : 1.0;
  expected = std::clamp(expected, 0.0, 1.0);
  const double actual = view.processed_records / view.assigned_records;
  const double error = expected - actual;

  const double horizon = std::max(view.proc_deadline - now, pi.period);
  const double feedforward = remaining / (view.profiled_rate * horizon);

  return control::pi_step(pi, feedforward, error);
}

}  // namespace mlsched::batch
