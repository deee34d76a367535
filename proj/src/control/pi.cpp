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
#include "mlsched/control/pi.hpp"

#include <algorithm>

namespace mlsched::control {

double pi_step(PiControllerState& s, double feedforward, double error, double p_scale) {
  double next_integral = s.integral + error;
  if (s.ki > 0.0) {
    const double span = (s.u_max - s.u_min) / s.ki;
    next_integral = std::clamp(next_integral, -span, span);
  }

  double u = feedforward + s.kp * error * p_scale + s.ki * next_integral;
  const bool sat_high = u > s.u_max && error > 0.0;
  const bool sat_low = u < s.u_min && error < 0.0;
  if (sat_high || sat_low) {
    // Anti-windup: hold the integral while pushing further into saturation.
    u = feedforward + s.kp * error * p_scale + s.ki * s.integral;
  } else {
    s.integral = next_integral;
  }
  return std::clamp(u, s.u_min, s.u_max);
}

}  // namespace mlsched::control
