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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlsched/harness/export.hpp"
#include "mlsched/harness/replicate.hpp"
#include "mlsched/harness/runner.hpp"
#include "mlsched/harness/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mlsched;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

struct CommonFlags {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string strategy;  // --strategy and --policy are synonyms
  std::string policy;
  std::string format = "csv";
};

harness::ExportFormat export_format(const CommonFlags& flags) {
  return flags.format == "json" ? harness::ExportFormat::Json : harness::ExportFormat::Csv;
}

/// Maps a policy id onto the scenario's kind. Same ids as the schema.
void set_policy(harness::ScenarioConfig& cfg, const std::string& id) {
  switch (cfg.kind) {
    case harness::ScenarioKind::Batch:
      if (id == "fifo")
        cfg.batch.policy = batch::BatchPolicy::Fifo;
      else if (id == "edf")
        cfg.batch.policy = batch::BatchPolicy::DynaEdf;
      else if (id == "proportional")
        cfg.batch.policy = batch::BatchPolicy::DynaProportional;
      else
        throw harness::ValidationError("policy '" + id +
                                       "' invalid for a batch scenario "
                                       "(valid: fifo, edf, proportional)");
      break;
    case harness::ScenarioKind::Federation:
      if (id == "linear")
        cfg.fed.trajectory = fed::Trajectory::Linear;
      else if (id == "quadratic")
        cfg.fed.trajectory = fed::Trajectory::Quadratic;
      else
        throw harness::ValidationError("policy '" + id +
                                       "' invalid for a federation scenario "
                                       "(valid: linear, quadratic)");
      break;
    case harness::ScenarioKind::Serving:
      if (id == "roma")
        cfg.serving.policy = serve::ServingPolicy::Roma;
      else if (id == "rules")
        cfg.serving.policy = serve::ServingPolicy::Rules;
      else
        throw harness::ValidationError("policy '" + id +
                                       "' invalid for a serving scenario "
                                       "(valid: roma, rules)");
      break;
  }
}

/// Flags override scenario fields: --seed replaces the base seed,
/// --strategy/--policy replace the policy id.
harness::ScenarioConfig load_with_overrides(const std::string& path, const CommonFlags& flags) {
  harness::ScenarioConfig cfg = harness::load_scenario(path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.strategy.empty() && !flags.policy.empty() && flags.strategy != flags.policy)
    throw harness::ValidationError("--strategy and --policy are synonyms; got '" +
                                   flags.strategy + "' and '" + flags.policy + "'");
  const std::string& id = !flags.strategy.empty() ? flags.strategy : flags.policy;
  if (!id.empty()) set_policy(cfg, id);
  return cfg;
}

std::string default_out_dir(const std::string& scenario_path, const std::string& sub) {
  fs::path p(scenario_path);
  fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::string stem = p.stem().string();
  fs::path out = dir / (stem + "_results");
  if (!sub.empty()) out /= sub;
  return out.string();
}

json read_summary(const std::string& out_dir) {
  std::ifstream in(fs::path(out_dir) / "summary.json");
  if (!in) throw std::runtime_error("summary.json missing under '" + out_dir + "'");
  json j;
  in >> j;
  return j;
}

/// The printed line quotes the exported summary, not live state.
std::string summary_line(const json& s) {
  std::string kind = s.at("kind");
  std::string line = kind + " policy=" + std::string(s.at("policy")) +
                     " seed=" + std::to_string(std::uint64_t(s.at("seed"))) +
                     " replicates=" + std::to_string(int(s.at("replicates")));
  const json& agg = s.at("aggregate");
  if (kind == "batch") {
    int jobs = 0;
    for (const auto& run : s.at("runs")) jobs += int(run.at("jobs").size());
    line += " violations=" + std::to_string(int(agg.at("violations"))) + "/" +
            std::to_string(jobs) + " jobs";
  } else if (kind == "federation") {
    line += " sla_met=" + std::to_string(int(agg.at("sla_met_seeds"))) + "/" +
            std::to_string(int(s.at("runs").size())) +
            " mean_final_ac=" + agg.at("mean_final_ac_eval").dump();
  } else {
    line += " violation_windows=" + std::to_string(int(agg.at("total_violation_windows"))) +
            " mean_cores=" + agg.at("mean_cores").dump();
  }
  return line;
}

int cmd_run(const std::string& scenario_path, const CommonFlags& flags) {
  harness::ScenarioConfig cfg = load_with_overrides(scenario_path, flags);
  auto runs = harness::run_replicates(cfg);
  std::string out_dir = flags.out.empty() ? default_out_dir(scenario_path, "") : flags.out;
  harness::export_results(cfg, runs, out_dir, export_format(flags));
  std::cout << summary_line(read_summary(out_dir)) << " out=" << out_dir << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& scenario_path, std::vector<std::string> policies,
                const CommonFlags& flags) {
  harness::ScenarioConfig base = load_with_overrides(scenario_path, flags);
  if (policies.empty()) {
    switch (base.kind) {
      case harness::ScenarioKind::Batch:
        policies = {"fifo", "edf", "proportional"};
        break;
      case harness::ScenarioKind::Federation:
        policies = {"linear", "quadratic"};
        break;
      case harness::ScenarioKind::Serving:
        policies = {"rules", "roma"};
        break;
    }
  }
  std::string out_root = flags.out.empty() ? default_out_dir(scenario_path, "") : flags.out;
  std::vector<json> summaries;
  for (const std::string& id : policies) {
    harness::ScenarioConfig cfg = base;
    set_policy(cfg, id);
    auto runs = harness::run_replicates(cfg);
    std::string out_dir = (fs::path(out_root) / id).string();
    harness::export_results(cfg, runs, out_dir, export_format(flags));
    summaries.push_back(read_summary(out_dir));
  }
  for (const json& s : summaries) std::cout << summary_line(s) << "\n";
  if (summaries.size() == 2) {
    const json& a = summaries[0];
    const json& b = summaries[1];
    if (base.kind == harness::ScenarioKind::Serving) {
      double va = double(a.at("aggregate").at("total_violation_windows"));
      double vb = double(b.at("aggregate").at("total_violation_windows"));
      if (va > 0.0)
        std::cout << std::string(b.at("policy")) << " reduces violation windows by "
                  << harness::format_float((1.0 - vb / va) * 100.0) << "% vs "
                  << std::string(a.at("policy")) << "\n";
    } else if (base.kind == harness::ScenarioKind::Federation) {
      std::cout << "final accuracy delta ("
                << std::string(b.at("policy")) << " - " << std::string(a.at("policy"))
                << ") = "
                << harness::format_float(double(b.at("aggregate").at("mean_final_ac_eval")) -
                                         double(a.at("aggregate").at("mean_final_ac_eval")))
                << "\n";
    }
  }
  return kExitOk;
}

int cmd_replicate(const std::string& experiment, std::string scenarios_dir,
                  const CommonFlags& flags) {
  if (scenarios_dir.empty()) {
    if (const char* env = std::getenv("MLSCHED_SCENARIOS"))
      scenarios_dir = env;
    else
      scenarios_dir = "scenarios";
  }
  std::string file;
  if (experiment == "batch")
    file = "batch_deadlines.json";
  else if (experiment == "federation")
    file = "fed_accuracy.json";
  else if (experiment == "serving")
    file = "serving_slas.json";
  else
    throw harness::ValidationError("unknown experiment '" + experiment +
                                   "' (valid: batch, federation, serving)");
  harness::ScenarioConfig cfg =
      harness::load_scenario((fs::path(scenarios_dir) / file).string());
  if (flags.seed) cfg.seed = *flags.seed;
  auto checks = harness::run_replication(cfg);
  for (const auto& c : checks)
    std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << ": " << c.detail << "\n";
  return harness::all_passed(checks) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator for deadline, federation and serving schedulers"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string scenario_path;
  std::vector<std::string> policies;
  std::string experiment;
  std::string scenarios_dir;

  auto add_common = [&](CLI::App* cmd, bool with_policy) {
    cmd->add_option("--out", flags.out, "output directory (default: next to the scenario)");
    cmd->add_option("--seed", flags.seed, "override the scenario seed");
    cmd->add_option("--format", flags.format, "table file format")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_policy) {
      cmd->add_option("--strategy", flags.strategy, "override the policy id");
      cmd->add_option("--policy", flags.policy, "synonym of --strategy");
    }
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario and export results");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  add_common(run, true);

  CLI::App* compare =
      app.add_subcommand("compare", "run several policies on the same workload and seed");
  compare->add_option("scenario", scenario_path, "scenario file")->required();
  compare->add_option("-p,--policy", policies, "policy ids to compare (default: all valid)");
  compare->add_option("--out", flags.out, "output root (one subdirectory per policy)");
  compare->add_option("--seed", flags.seed, "override the scenario seed");
  compare->add_option("--format", flags.format, "table file format")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* replicate =
      app.add_subcommand("replicate", "re-run a bundled experiment and check its findings");
  replicate->add_option("experiment", experiment, "batch | federation | serving")->required();
  replicate->add_option("--scenarios", scenarios_dir,
                        "bundled scenario directory (default: $MLSCHED_SCENARIOS or ./scenarios)");
  replicate->add_option("--seed", flags.seed, "override the scenario seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, flags);
    if (compare->parsed()) return cmd_compare(scenario_path, policies, flags);
    return cmd_replicate(experiment, scenarios_dir, flags);
  } catch (const harness::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const harness::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
