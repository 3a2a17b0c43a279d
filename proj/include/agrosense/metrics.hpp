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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "agrosense/matrix.hpp"

namespace agro {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::size_t classes = 0;
  std::vector<std::size_t> counts;

  std::size_t at(std::size_t truth, std::size_t predicted) const { return counts[truth * classes + predicted]; }
  std::size_t total() const;
  std::size_t trace() const;
};

struct ClassificationSummary {
  ConfusionMatrix confusion;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  double accuracy = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
};

// Per-class P, R, F1 with 0/0 -> 0, macro-averaged over all c classes.
ClassificationSummary confusion_and_prf(std::span<const int> truth, std::span<const int> predicted, std::size_t c);

struct ErrorSummary {
  double rmse = 0.0;
  double mae = 0.0;
};

ErrorSummary rmse_mae(std::span<const double> truth, std::span<const double> predicted);

// Rank-statistic AUC with midranks for ties.
double binary_auc(std::span<const double> scores, std::span<const bool> positive);

struct AucResult {
  double auc = 0.0;
  std::vector<std::size_t> skipped_classes;
};

// Macro one-vs-rest AUC over classes that have both positives and negatives.
AucResult roc_auc_macro_ovr(std::span<const int> truth, const Matrix& probabilities, std::size_t c);

struct MetricsReport {
  double accuracy = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  double roc_auc_macro = 0.0;
  double rmse = 0.0;
  double mae = 0.0;

  bool operator==(const MetricsReport&) const = default;
};

// Predictions are row argmaxes; RMSE/MAE are taken over class indices.
MetricsReport evaluate_predictions(std::span<const int> truth, const Matrix& probabilities, std::size_t c);

// Flat object keyed accuracy, precision_macro, recall_macro, f1_macro,
// roc_auc_macro, rmse, mae.
std::string metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const std::string& text);

}  // namespace agro
