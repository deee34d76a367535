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
#ifndef MLSCHED_CONTROL_PI_HPP
#define MLSCHED_CONTROL_PI_HPP

namespace mlsched::control {

/// PI state for vertical CPU scaling. The same law drives batch stage
/// executors (progress error) and serving executors (response-time error).
struct PiControllerState {
  double kp = 2.0;
  double ki = 0.5;
  double integral = 0.0;
  double u_min = 0.0;
  double u_max = 4.0;
  double period = 1.0;  // seconds between invocations
};

/// One controller step: feedforward plus PI correction, clamped to
/// [u_min, u_max]. The integral only accumulates while the output is
/// unsaturated (or saturated against the error direction), and is clamped
/// so ki * integral never exceeds the actuator span. `p_scale` scales the
/// proportional term only; the integral always sees the raw error.
double pi_step(PiControllerState& state, double feedforward, double error,
               double p_scale = 1.0);

}  // namespace mlsched::control

#endif  // MLSCHED_CONTROL_PI_HPP
