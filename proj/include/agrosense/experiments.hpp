/*
 * Copyright 2026 The AgroSense Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agrosense/data.hpp"
#include "agrosense/metrics.hpp"
#include "agrosense/pipeline.hpp"
#include "agrosense/stats.hpp"

namespace agro {

struct AblationConfig {
  PipelineConfig pipeline;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

struct ArmResult {
  std::string name;         // fused | tabular_only | image_only
  std::string model;        // e.g. "MLP 64-relu-c"
  std::string modality;     // table column text
  std::vector<MetricsReport> per_seed;
  MetricsReport mean;
  MetricsReport stddev;     // sample standard deviation across seeds
};

struct TTestAnnotation {
  std::string baseline;  // arm compared against fused
  TTestResult result;
};

struct AblationReport {
  std::vector<std::uint64_t> seeds;
  std::vector<ArmResult> arms;
  // Test ids per seed; every arm of that seed was scored on exactly this set.
  std::vector<std::vector<std::string>> test_ids;
  std::vector<TTestAnnotation> ttests;
  std::optional<AnovaResult> anova;
  std::string anova_note;
};

// Trains and scores the three arms for every seed. Errors are annotated with
// the arm and seed that raised them.
AblationReport run_ablation(const Dataset& dataset, const AblationConfig& config);

// Fills in paired t-tests on accuracy (fused against each unimodal arm) and a
// one-way ANOVA on per-seed RMSE across all arms.
void significance(AblationReport& report);

// "markdown" or "csv"; anything else is a contract error.
std::string emit_report(const AblationReport& report, std::string_view format);

// Mean and sample standard deviation of each metric.
MetricsReport mean_metrics(std::span<const MetricsReport> rows);
MetricsReport stddev_metrics(std::span<const MetricsReport> rows);

}  // namespace agro
