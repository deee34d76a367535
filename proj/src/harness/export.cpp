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
#include "mlsched/harness/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace mlsched::harness {

namespace {

using nlohmann::json;

/// Quotes a CSV field only when it needs it.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

/// Doubles destined for JSON go through the same 9-digit rendering as the
/// CSV so both artifacts agree and stay platform-stable.
double round9(double v) { return std::stod(format_float(v)); }

json job_json(const sim::JobRecord& r) {
  return {{"id", r.job_id},
          {"submit", round9(r.submit)},
          {"deadline_abs", round9(r.deadline_abs)},
          {"finish", round9(r.finish)},
          {"violated", r.violated},
          {"budget_frac", round9((r.finish - r.submit) / (r.deadline_abs - r.submit))},
          {"mean_cores", round9(r.mean_cores)}};
}

json rows_json(const ScenarioConfig& cfg, const sim::MetricsLog& log, const std::string& table) {
  json rows = json::array();
  if (table == "jobs") {
    for (const auto& r : log.jobs) rows.push_back(job_json(r));
  } else if (table == "rounds") {
    for (const auto& r : log.rounds) {
      json row = {{"r", r.round},        {"e_r", r.epochs},
                  {"s_r", r.cumulative_epochs}, {"ac_fit", round9(r.ac_fit)},
                  {"ac_eval", round9(r.ac_eval)}};
      row["target"] = r.has_target ? json(round9(r.target)) : json(nullptr);
      rows.push_back(row);
    }
  } else if (table == "windows") {
    for (const auto& r : log.windows)
      rows.push_back({{"service", r.service},
                      {"window_start", round9(r.window_start)},
                      {"agg_rt", round9(r.agg_rt)},
                      {"violated", r.violated},
                      {"cores", round9(r.cores)}});
  } else if (table == "requests") {
    for (const auto& r : log.requests)
      rows.push_back({{"request_id", r.id},
                      {"service", r.service},
                      {"arrival", round9(r.arrival)},
                      {"start", round9(r.start)},
                      {"finish", round9(r.finish)},
                      {"device", sim::device_name(r.device)}});
  } else if (table == "samples") {
    for (const auto& r : log.samples)
      rows.push_back(
          {{"time", round9(r.time)}, {"series", r.series}, {"value", round9(r.value)}});
  }
  (void)cfg;
  return rows;
}

std::string table_csv(const sim::MetricsLog& log, const std::string& table) {
  if (table == "jobs") return jobs_csv(log.jobs);
  if (table == "rounds") return rounds_csv(log.rounds);
  if (table == "windows") return windows_csv(log.windows);
  if (table == "requests") return requests_csv(log.requests);
  return samples_csv(log.samples);
}

std::vector<std::string> tables_for(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Batch:
      return {"jobs", "samples"};
    case ScenarioKind::Federation:
      return {"rounds", "samples"};
    case ScenarioKind::Serving:
    default:
      return {"windows", "requests", "samples"};
  }
}

}  // namespace

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string jobs_csv(const std::vector<sim::JobRecord>& rows) {
  std::string out = "job_id,submit,deadline_abs,finish,violated,mean_cores\n";
  for (const auto& r : rows) {
    out += csv_field(r.job_id) + ',' + format_float(r.submit) + ',' +
           format_float(r.deadline_abs) + ',' + format_float(r.finish) + ',' +
           (r.violated ? "1" : "0") + ',' + format_float(r.mean_cores) + '\n';
  }
  return out;
}

std::string rounds_csv(const std::vector<sim::RoundRecord>& rows) {
  std::string out = "r,target,e_r,s_r,ac_fit,ac_eval\n";
  for (const auto& r : rows) {
    out += std::to_string(r.round) + ',' + (r.has_target ? format_float(r.target) : "") + ',' +
           std::to_string(r.epochs) + ',' + std::to_string(r.cumulative_epochs) + ',' +
           format_float(r.ac_fit) + ',' + format_float(r.ac_eval) + '\n';
  }
  return out;
}

std::string windows_csv(const std::vector<sim::WindowRecord>& rows) {
  std::string out = "service,window_start,agg_rt,violated,cores\n";
  for (const auto& r : rows) {
    out += csv_field(r.service) + ',' + format_float(r.window_start) + ',' +
           format_float(r.agg_rt) + ',' + (r.violated ? "1" : "0") + ',' +
           format_float(r.cores) + '\n';
  }
  return out;
}

std::string requests_csv(const std::vector<sim::RequestRecord>& rows) {
  std::string out = "request_id,service,arrival,start,finish,device\n";
  for (const auto& r : rows) {
    out += std::to_string(r.id) + ',' + csv_field(r.service) + ',' + format_float(r.arrival) +
           ',' + format_float(r.start) + ',' + format_float(r.finish) + ',' +
           sim::device_name(r.device) + '\n';
  }
  return out;
}

std::string samples_csv(const std::vector<sim::Sample>& rows) {
  std::string out = "time,series,value\n";
  for (const auto& r : rows) {
    out += format_float(r.time) + ',' + csv_field(r.series) + ',' + format_float(r.value) + '\n';
  }
  return out;
}

int count_violated_windows(const sim::MetricsLog& log) {
  int n = 0;
  for (const auto& w : log.windows)
    if (w.violated) ++n;
  return n;
}

double serving_mean_cores(const sim::MetricsLog& log) {
  std::map<std::string, std::pair<double, int>> per_service;  // sum, count
  for (const auto& w : log.windows) {
    auto& acc = per_service[w.service];
    acc.first += w.cores;
    acc.second += 1;
  }
  double total = 0.0;
  for (const auto& [id, acc] : per_service) total += acc.first / acc.second;
  return total;
}

nlohmann::json build_summary(const ScenarioConfig& cfg, const std::vector<RunResult>& runs) {
  json j;
  j["kind"] = kind_name(cfg.kind);
  j["policy"] = cfg.policy_id();
  j["seed"] = cfg.seed;
  j["replicates"] = cfg.replicates;

  json blocks = json::array();
  json aggregate;
  switch (cfg.kind) {
    case ScenarioKind::Batch: {
      int violations = 0;
      for (const auto& run : runs) {
        json jobs = json::array();
        int v = 0;
        for (const auto& r : run.log.jobs) {
          jobs.push_back(job_json(r));
          if (r.violated) ++v;
        }
        violations += v;
        blocks.push_back({{"seed", run.seed}, {"violations", v}, {"jobs", jobs}});
      }
      aggregate = {{"violations", violations}};
      break;
    }
    case ScenarioKind::Federation: {
      int met = 0;
      double sum_final = 0.0;
      for (const auto& run : runs) {
        const auto& last = run.log.rounds.back();
        bool sla_met = last.ac_eval >= cfg.fed.ac_sla;
        if (sla_met) ++met;
        sum_final += last.ac_eval;
        blocks.push_back({{"seed", run.seed},
                          {"rounds", run.log.rounds.size()},
                          {"total_epochs", last.cumulative_epochs},
                          {"final_ac_fit", round9(last.ac_fit)},
                          {"final_ac_eval", round9(last.ac_eval)},
                          {"sla_met", sla_met}});
      }
      aggregate = {{"sla_met_seeds", met},
                   {"mean_final_ac_eval", round9(sum_final / runs.size())}};
      break;
    }
    case ScenarioKind::Serving: {
      int total_violated = 0;
      double sum_cores = 0.0;
      for (const auto& run : runs) {
        int v = count_violated_windows(run.log);
        double cores = serving_mean_cores(run.log);
        total_violated += v;
        sum_cores += cores;
        blocks.push_back({{"seed", run.seed},
                          {"requests", run.log.requests.size()},
                          {"windows", run.log.windows.size()},
                          {"violation_windows", v},
                          {"mean_cores", round9(cores)}});
      }
      aggregate = {{"total_violation_windows", total_violated},
                   {"mean_violation_windows", round9(double(total_violated) / runs.size())},
                   {"mean_cores", round9(sum_cores / runs.size())}};
      break;
    }
  }
  j["runs"] = blocks;
  j["aggregate"] = aggregate;
  return j;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::vector<std::string> export_results(const ScenarioConfig& cfg,
                                        const std::vector<RunResult>& runs,
                                        const std::string& out_dir, ExportFormat format) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  const char* ext = format == ExportFormat::Csv ? ".csv" : ".json";
  for (const auto& run : runs) {
    for (const std::string& table : tables_for(cfg.kind)) {
      fs::path path = fs::path(out_dir) / (table + "_seed" + std::to_string(run.seed) + ext);
      std::string body = format == ExportFormat::Csv
                             ? table_csv(run.log, table)
                             : rows_json(cfg, run.log, table).dump(2) + "\n";
      atomic_write(path.string(), body);
      written.push_back(path.string());
    }
  }
  fs::path summary_path = fs::path(out_dir) / "summary.json";
  atomic_write(summary_path.string(), build_summary(cfg, runs).dump(2) + "\n");
  written.push_back(summary_path.string());
  return written;
}

}  // namespace mlsched::harness
