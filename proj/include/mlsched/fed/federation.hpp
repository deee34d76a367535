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
#ifndef MLSCHED_FED_FEDERATION_HPP
#define MLSCHED_FED_FEDERATION_HPP

#include <random>
#include <utility>
#include <vector>

#include "mlsched/sim/metrics.hpp"

namespace mlsched::fed {

/// Shape of the per-round accuracy targets between the bootstrap
/// measurement and the final SLA. Quadratic is the concave branch: it
/// front-loads progress and flattens toward the end, mirroring how
/// accuracy actually saturates.
enum class Trajectory { Linear, Quadratic };

struct FederationConfig {
  int rounds = 10;  // R, fixed ahead of time; training never stops early
  double ac_sla = 0.8;
  Trajectory trajectory = Trajectory::Quadratic;
  int e_bootstrap = 1;
  int e_max = 16;
  int node_count = 8;
  double epoch_duration = 1.0;  // simulated seconds per local epoch
  double sync_delay = 1.0;      // per-round aggregation delay, seconds

  void validate() const;
};

/// Everything the planner may look at about a finished round.
struct RoundState {
  int r = 0;     // 1-based round index
  int e_r = 0;   // epochs executed in round r
  int s_r = 0;   // cumulative epochs through round r
  double ac_r = 0.0;
};

/// Synthetic training plant: accuracy after S cumulative epochs follows
/// a_max * (1 - exp(-k S)), with a per-node jitter on k and gaussian
/// measurement noise on the aggregate. The planner never sees these
/// parameters, only the measured accuracies.
struct LearningCurveOracle {
  double a_max = 0.85;
  double k = 0.21;
  double noise_sd = 0.0;
  double eval_gap = 0.01;  // fit-to-eval generalization gap
  std::vector<double> jitters;  // relative jitter on k, one per node

  void validate() const;
  double node_accuracy(std::size_t node, double s) const;
  /// Noise-free aggregate: mean across nodes (a single unjittered node
  /// when no jitters are configured).
  double mean_accuracy(double s) const;
};

/// Per-round accuracy target on the way from the anchor (r0, ac0) to
/// ac_sla at round R. target(R) equals ac_sla exactly for both shapes.
/// Throws std::invalid_argument unless r0 < r <= R.
double target_accuracy(int r, const FederationConfig& cfg, int r0, double ac0);

/// Epoch budget for the next round from the last two measurements: a
/// secant extrapolation of accuracy-per-epoch, ceiled and clamped to
/// [1, e_max]. A vanishing or negative slope falls back to the previous
/// round's budget. Deliberately black-box: no oracle parameters here.
int estimate_epochs(double target, const RoundState& prev2, const RoundState& prev1,
                    int e_max);

/// Runs `epochs` more epochs on every node and measures the aggregate.
/// Returns (ac_fit, ac_eval), both clamped to [0, 1].
std::pair<double, double> simulate_round(const LearningCurveOracle& oracle, int epochs,
                                         int s_prev, std::mt19937_64& noise_stream);

/// Full R-round run: two bootstrap rounds at e_bootstrap, then
/// target/estimate/simulate per round, anchored at the round-2
/// measurement. The log carries one RoundRecord per round plus accuracy
/// and target samples on the simulated timeline.
sim::MetricsLog run_federation(const FederationConfig& cfg, const LearningCurveOracle& oracle,
                               std::mt19937_64& noise_stream);

}  // namespace mlsched::fed

#endif  // MLSCHED_FED_FEDERATION_HPP
