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
#include "mlsched/fed/federation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mlsched/harness/random.hpp"
#include "mlsched/sim/engine.hpp"

namespace mlsched::fed {

void FederationConfig::validate() const {
  if (rounds < 3)
    throw std::invalid_argument("rounds must be >= 3 (two bootstrap rounds plus one planned)");
  if (!(ac_sla > 0.0 && ac_sla < 1.0))
    throw std::invalid_argument("ac_sla must be in (0, 1)");
  if (e_bootstrap < 1) throw std::invalid_argument("e_bootstrap must be >= 1");
  if (e_max < 1) throw std::invalid_argument("e_max must be >= 1");
  if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  if (epoch_duration < 0.0 || sync_delay < 0.0)
    throw std::invalid_argument("durations must be >= 0");
}

void LearningCurveOracle::validate() const {
  if (!(a_max > 0.0 && a_max <= 1.0)) throw std::invalid_argument("a_max must be in (0, 1]");
  if (k <= 0.0) throw std::invalid_argument("k must be > 0");
  if (noise_sd < 0.0) throw std::invalid_argument("noise_sd must be >= 0");
  if (eval_gap < 0.0) throw std::invalid_argument("eval_gap must be >= 0");
  for (double j : jitters) {
    if (k * (1.0 + j) <= 0.0) throw std::invalid_argument("jitter drives k non-positive");
  }
}

double LearningCurveOracle::node_accuracy(std::size_t node, double s) const {
  const double jitter = node < jitters.size() ? jitters[node] : 0.0;
  return a_max * (1.0 - std::exp(-k * (1.0 + jitter) * s));
}

double LearningCurveOracle::mean_accuracy(double s) const {
  const std::size_t n = jitters.empty() ? 1 : jitters.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += node_accuracy(i, s);
  return sum / static_cast<double>(n);
}

double target_accuracy(int r, const FederationConfig& cfg, int r0, double ac0) {
  if (r <= r0)
    throw std::invalid_argument("target requested for round " + std::to_string(r) +
                                " at or before the anchor round " + std::to_string(r0));
  if (r > cfg.rounds)
    throw std::invalid_argument("target requested past the final round");
  if (r == cfg.rounds) return cfg.ac_sla;  // exact endpoint, no rounding residue

  const double x = static_cast<double>(r - r0) / static_cast<double>(cfg.rounds - r0);
  const double rise = cfg.ac_sla - ac0;
  if (cfg.trajectory == Trajectory::Linear) return ac0 + rise * x;
  return ac0 + rise * (1.0 - (1.0 - x) * (1.0 - x));
}

int estimate_epochs(double target, const RoundState& prev2, const RoundState& prev1,
                    int e_max) {
  if (prev2.s_r >= prev1.s_r)
    throw std::invalid_argument("history must have strictly increasing cumulative epochs");
  const double m =
      (prev1.ac_r - prev2.ac_r) / static_cast<double>(prev1.s_r - prev2.s_r);
  if (m <= 1e-6) return std::clamp(prev1.e_r, 1, e_max);  // plateaued; repeat last budget
  const double need = (target - prev1.ac_r) / m;
  const int e = static_cast<int>(std::ceil(need));
  return std::clamp(e, 1, e_max);
}

std::pair<double, double> simulate_round(const LearningCurveOracle& oracle, int epochs,
                                         int s_prev, std::mt19937_64& noise_stream) {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  const double s = static_cast<double>(s_prev + epochs);
  double ac_fit = oracle.mean_accuracy(s);
  if (oracle.noise_sd > 0.0) ac_fit += harness::gaussian(noise_stream, 0.0, oracle.noise_sd);
  ac_fit = std::clamp(ac_fit, 0.0, 1.0);
  const double ac_eval = std::clamp(ac_fit - oracle.eval_gap, 0.0, 1.0);
  return {ac_fit, ac_eval};
}

sim::MetricsLog run_federation(const FederationConfig& cfg, const LearningCurveOracle& oracle,
                               std::mt19937_64& noise_stream) {
  cfg.validate();
  oracle.validate();

  sim::SimEngine engine;
  std::vector<RoundState> history;
  int cumulative = 0;

  // Round bodies run as completion events so the log gets a meaningful
  // simulated timeline; planning for round r happens when r-1 completes.
  std::function<void(int)> launch = [&](int r) {
    bool has_target = false;
    double target = 0.0;
    int epochs = cfg.e_bootstrap;
    if (r > 2) {
      const RoundState& anchor = history[1];  // round 2 measurement
      has_target = true;
      target = target_accuracy(r, cfg, anchor.r, anchor.ac_r);
      epochs = estimate_epochs(target, history[static_cast<std::size_t>(r - 3)],
                               history[static_cast<std::size_t>(r - 2)], cfg.e_max);
    }
    const double duration = epochs * cfg.epoch_duration + cfg.sync_delay;
    engine.schedule(engine.now() + duration, sim::EventKind::RoundComplete,
                    [&, r, epochs, has_target, target] {
                      const auto [ac_fit, ac_eval] =
                          simulate_round(oracle, epochs, cumulative, noise_stream);
                      cumulative += epochs;
                      history.push_back(RoundState{r, epochs, cumulative, ac_fit});

                      sim::RoundRecord rec;
                      rec.round = r;
                      rec.has_target = has_target;
                      rec.target = target;
                      rec.epochs = epochs;
                      rec.cumulative_epochs = cumulative;
                      rec.ac_fit = ac_fit;
                      rec.ac_eval = ac_eval;
                      engine.log().rounds.push_back(rec);
                      engine.log().sample(engine.now(), "ac_fit", ac_fit);
                      engine.log().sample(engine.now(), "ac_eval", ac_eval);
                      if (has_target) engine.log().sample(engine.now(), "target", target);
                      engine.log().sample(engine.now(), "epochs", epochs);

                      if (r < cfg.rounds) launch(r + 1);
                    });
  };
  launch(1);
  return engine.run_all();
}

}  // namespace mlsched::fed
