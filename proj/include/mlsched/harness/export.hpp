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
#ifndef MLSCHED_HARNESS_EXPORT_HPP
#define MLSCHED_HARNESS_EXPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "mlsched/harness/runner.hpp"
#include "mlsched/harness/scenario.hpp"
#include "mlsched/sim/metrics.hpp"

namespace mlsched::harness {

enum class ExportFormat { Csv, Json };

/// 9 significant digits, shortest form ("%.9g").
std::string format_float(double v);

/// Row tables with fixed column sets. Booleans render as 0/1; the round
/// target column is empty on bootstrap rounds.
std::string jobs_csv(const std::vector<sim::JobRecord>& rows);
std::string rounds_csv(const std::vector<sim::RoundRecord>& rows);
std::string windows_csv(const std::vector<sim::WindowRecord>& rows);
std::string requests_csv(const std::vector<sim::RequestRecord>& rows);
std::string samples_csv(const std::vector<sim::Sample>& rows);

/// Summary stats shared by the exporter, the CLI, and the replication
/// checks. Serving mean cores sums each service's window-average grant.
int count_violated_windows(const sim::MetricsLog& log);
double serving_mean_cores(const sim::MetricsLog& log);

/// Whole-invocation summary: per-replicate blocks plus an aggregate.
nlohmann::json build_summary(const ScenarioConfig& cfg, const std::vector<RunResult>& runs);

/// Writes content to path via a temp file and rename, creating parent
/// directories. I/O failures surface as std::runtime_error.
void atomic_write(const std::string& path, const std::string& content);

/// Writes one table file per (run, table) plus summary.json into out_dir.
/// Returns the written paths in a stable order.
std::vector<std::string> export_results(const ScenarioConfig& cfg,
                                        const std::vector<RunResult>& runs,
                                        const std::string& out_dir, ExportFormat format);

}  // namespace mlsched::harness

#endif  // MLSCHED_HARNESS_EXPORT_HPP
