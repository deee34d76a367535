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
#include <string>
#include <vector>

#include "doctest.h"
#include "mlsched/control/pi.hpp"
#include "mlsched/sim/engine.hpp"

using mlsched::control::PiControllerState;
using mlsched::control::pi_step;
using mlsched::sim::EventKind;
using mlsched::sim::SimEngine;

TEST_CASE("events at the same timestamp run in insertion order") {
  SimEngine eng;
  std::string order;
  eng.schedule(5.0, EventKind::Custom, [&] { order += 'a'; });
  eng.schedule(5.0, EventKind::Custom, [&] { order += 'b'; });
  eng.schedule(2.0, EventKind::Custom, [&] { order += 'c'; });
  eng.schedule(5.0, EventKind::Custom, [&] { order += 'd'; });
  eng.run_until(10.0);
  CHECK(order == "cabd");
}

TEST_CASE("scheduling in the past throws") {
  SimEngine eng;
  eng.schedule(3.0, EventKind::Custom, [] {});
  eng.run_until(3.0);
  CHECK(eng.now() == 3.0);
  CHECK_THROWS_AS(eng.schedule(2.0, EventKind::Custom, [] {}), std::logic_error);
}

TEST_CASE("run_until advances the clock even with an empty queue") {
  SimEngine eng;
  eng.run_until(100.0);
  CHECK(eng.now() == 100.0);
}

TEST_CASE("events after the horizon stay queued") {
  SimEngine eng;
  int fired = 0;
  eng.schedule(1.0, EventKind::Custom, [&] { ++fired; });
  eng.schedule(7.0, EventKind::Custom, [&] { ++fired; });
  eng.run_until(5.0);
  CHECK(fired == 1);
  CHECK(eng.now() == 5.0);
  eng.run_until(10.0);
  CHECK(fired == 2);
}

TEST_CASE("handlers can schedule follow-up events") {
  SimEngine eng;
  std::vector<double> times;
  eng.schedule(1.0, EventKind::Custom, [&] {
    times.push_back(eng.now());
    eng.schedule(eng.now() + 1.5, EventKind::Custom, [&] { times.push_back(eng.now()); });
  });
  eng.run_all();
  REQUIRE(times.size() == 2);
  CHECK(times[0] == 1.0);
  CHECK(times[1] == 2.5);
}

TEST_CASE("run_all stops the clock at the last event") {
  SimEngine eng;
  eng.schedule(4.25, EventKind::Custom, [] {});
  eng.run_all();
  CHECK(eng.now() == 4.25);
}

TEST_CASE("tick loop fires once per period while the workload is active") {
  // A 10 second workload with a 1 second period sees ticks at t=1..10;
  // the tick at t=10 observes the workload already gone and stops the
  // chain.
  SimEngine eng;
  bool active = true;
  eng.schedule(10.0, EventKind::Custom, [&] { active = false; });
  std::vector<double> tick_times;
  eng.start_tick_loop(1.0, [&](double t) {
    tick_times.push_back(t);
    return active;
  });
  eng.run_all();
  CHECK(eng.ticks_fired() == 10);
  REQUIRE(tick_times.size() == 10);
  CHECK(tick_times.front() == 1.0);
  CHECK(tick_times.back() == 10.0);
  CHECK_FALSE(eng.tick_loop_running());
}

TEST_CASE("tick loop can be restarted after it stops") {
  SimEngine eng;
  int phase = 0;
  int ticks_in_phase = 0;
  eng.start_tick_loop(1.0, [&](double) { return ++ticks_in_phase < 3; });
  eng.run_all();
  CHECK(eng.ticks_fired() == 3);
  phase = 1;
  (void)phase;
  ticks_in_phase = 0;
  eng.start_tick_loop(1.0, [&](double) { return ++ticks_in_phase < 2; });
  eng.run_all();
  CHECK(eng.ticks_fired() == 5);
}

TEST_CASE("start_tick_loop is idempotent while running") {
  SimEngine eng;
  int ticks = 0;
  bool active = true;
  eng.schedule(5.0, EventKind::Custom, [&] { active = false; });
  eng.schedule(2.0, EventKind::Custom, [&] {
    // Re-arming mid-flight must not double the tick rate.
    eng.start_tick_loop(1.0, [&](double) {
      ++ticks;
      return active;
    });
  });
  eng.start_tick_loop(1.0, [&](double) {
    ++ticks;
    return active;
  });
  eng.run_all();
  CHECK(ticks == 5);
}

TEST_CASE("pi with zero error and empty integral returns the feedforward exactly") {
  PiControllerState pi;
  pi.u_max = 100.0;
  CHECK(pi_step(pi, 1.7, 0.0) == 1.7);
  CHECK(pi_step(pi, 0.3, 0.0) == 0.3);
  CHECK(pi.integral == 0.0);
}

TEST_CASE("pi applies proportional and integral terms") {
  PiControllerState pi;  // kp=2, ki=0.5
  pi.u_max = 100.0;
  const double u = pi_step(pi, 1.0, 0.1);
  CHECK(u == doctest::Approx(1.25).epsilon(1e-12));  // 1 + 2*0.1 + 0.5*0.1
  CHECK(pi.integral == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("p_scale damps only the proportional term") {
  PiControllerState pi;
  pi.u_max = 100.0;
  pi.ki = 0.0;
  const double u = pi_step(pi, 0.0, 1.0, 0.5);
  CHECK(u == doctest::Approx(1.0).epsilon(1e-12));  // kp * e * scale
}

TEST_CASE("saturated output freezes the integral") {
  PiControllerState pi;  // u_max = 4
  const double u1 = pi_step(pi, 3.9, 1.0);
  CHECK(u1 == 4.0);
  CHECK(pi.integral == 0.0);
  // Error gone: output returns to the feedforward with no windup tail.
  const double u2 = pi_step(pi, 3.9, 0.0);
  CHECK(u2 == doctest::Approx(3.9).epsilon(1e-12));
}

TEST_CASE("integral stays inside the actuator span") {
  PiControllerState pi;
  pi.kp = 0.0;
  pi.ki = 0.5;
  pi.u_min = 0.0;
  pi.u_max = 10.0;
  for (int i = 0; i < 500; ++i) pi_step(pi, 0.0, 1.0);
  CHECK(pi.integral <= (pi.u_max - pi.u_min) / pi.ki + 1e-12);
  for (int i = 0; i < 500; ++i) pi_step(pi, 0.0, -1.0);
  CHECK(pi.integral >= -(pi.u_max - pi.u_min) / pi.ki - 1e-12);
}

TEST_CASE("controller recovers promptly after prolonged saturation") {
  // Drive with a large positive error for a long time, then flip the
  // error sign; with conditional integration the output must leave the
  // rail immediately instead of bleeding off accumulated windup.
  PiControllerState pi;
  for (int i = 0; i < 100; ++i) pi_step(pi, 2.0, 5.0);
  const double u = pi_step(pi, 2.0, -0.1);
  CHECK(u < 4.0);
  CHECK(u == doctest::Approx(2.0 + 2.0 * -0.1 + 0.5 * pi.integral));
}
