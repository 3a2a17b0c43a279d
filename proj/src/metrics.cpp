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
#include "agrosense/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "agrosense/error.hpp"
#include "agrosense/nn.hpp"
#include "json.hpp"

namespace agro {

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t k = 0; k < classes; ++k) t += at(k, k);
  return t;
}

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ClassificationSummary confusion_and_prf(std::span<const int> truth, std::span<const int> predicted, std::size_t c) {
  if (truth.size() != predicted.size()) raise(ErrorCode::kContract, "label vectors differ in length");
  if (truth.empty()) raise(ErrorCode::kContract, "need at least one label");
  ClassificationSummary s;
  s.confusion.classes = c;
  s.confusion.counts.assign(c * c, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(truth[i]) >= c ||
        static_cast<std::size_t>(predicted[i]) >= c) {
      raise(ErrorCode::kContract, "label outside [0, c)");
    }
    ++s.confusion.counts[static_cast<std::size_t>(truth[i]) * c + static_cast<std::size_t>(predicted[i])];
  }
  s.precision.resize(c);
  s.recall.resize(c);
  s.f1.resize(c);
  for (std::size_t k = 0; k < c; ++k) {
    double tp = static_cast<double>(s.confusion.at(k, k));
    double col = 0.0, row = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      col += static_cast<double>(s.confusion.at(j, k));
      row += static_cast<double>(s.confusion.at(k, j));
    }
    s.precision[k] = safe_ratio(tp, col);
    s.recall[k] = safe_ratio(tp, row);
    s.f1[k] = safe_ratio(2.0 * s.precision[k] * s.recall[k], s.precision[k] + s.recall[k]);
  }
  const double cd = static_cast<double>(c);
  s.precision_macro = std::accumulate(s.precision.begin(), s.precision.end(), 0.0) / cd;
  s.recall_macro = std::accumulate(s.recall.begin(), s.recall.end(), 0.0) / cd;
  s.f1_macro = std::accumulate(s.f1.begin(), s.f1.end(), 0.0) / cd;
  s.accuracy = static_cast<double>(s.confusion.trace()) / static_cast<double>(s.confusion.total());
  return s;
}

ErrorSummary rmse_mae(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size()) raise(ErrorCode::kContract, "value vectors differ in length");
  if (truth.empty()) raise(ErrorCode::kContract, "rmse/mae need at least one value");
  double sq = 0.0, ab = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = predicted[i] - truth[i];
    sq += d * d;
    ab += std::abs(d);
  }
  const double n = static_cast<double>(truth.size());
  return {std::sqrt(sq / n), ab / n};
}

double binary_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) raise(ErrorCode::kContract, "score and label vectors differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (positive[order[k]]) {
        rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j + 1;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) raise(ErrorCode::kUndefinedAuc, "AUC needs positives and negatives");
  const double np = static_cast<double>(n_pos);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

AucResult roc_auc_macro_ovr(std::span<const int> truth, const Matrix& probabilities, std::size_t c) {
  if (probabilities.rows != truth.size() || probabilities.cols != c) {
    raise(ErrorCode::kContract, "probability matrix shape does not match labels and classes");
  }
  for (std::size_t i = 0; i < probabilities.rows; ++i) {
    const auto row = probabilities.row(i);
    if (std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) > 1e-6) {
      raise(ErrorCode::kContract, "probability row " + std::to_string(i) + " does not sum to 1");
    }
  }
  AucResult out;
  double sum = 0.0;
  std::size_t used = 0;
  std::vector<double> col(truth.size());
  // std::vector<bool> is not contiguous, so flags live in a plain array.
  auto flags = std::make_unique<bool[]>(truth.size());
  for (std::size_t k = 0; k < c; ++k) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      col[i] = probabilities(i, k);
      flags[i] = static_cast<std::size_t>(truth[i]) == k;
      n_pos += flags[i] ? 1 : 0;
    }
    if (n_pos == 0 || n_pos == truth.size()) {
      out.skipped_classes.push_back(k);
      continue;
    }
    sum += binary_auc(col, std::span<const bool>(flags.get(), truth.size()));
    ++used;
  }
  if (used == 0) raise(ErrorCode::kUndefinedAuc, "no class has both positive and negative samples");
  out.auc = sum / static_cast<double>(used);
  return out;
}

MetricsReport evaluate_predictions(std::span<const int> truth, const Matrix& probabilities, std::size_t c) {
  std::vector<int> predicted(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) predicted[i] = static_cast<int>(argmax(probabilities.row(i)));
  const auto prf = confusion_and_prf(truth, predicted, c);
  std::vector<double> t(truth.begin(), truth.end()), p(predicted.begin(), predicted.end());
  const auto err = rmse_mae(t, p);
  MetricsReport r;
  r.accuracy = prf.accuracy;
  r.precision_macro = prf.precision_macro;
  r.recall_macro = prf.recall_macro;
  r.f1_macro = prf.f1_macro;
  r.roc_auc_macro = roc_auc_macro_ovr(truth, probabilities, c).auc;
  r.rmse = err.rmse;
  r.mae = err.mae;
  return r;
}

std::string metrics_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["precision_macro"] = r.precision_macro;
  j["recall_macro"] = r.recall_macro;
  j["f1_macro"] = r.f1_macro;
  j["roc_auc_macro"] = r.roc_auc_macro;
  j["rmse"] = r.rmse;
  j["mae"] = r.mae;
  return j.dump();
}

MetricsReport metrics_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) raise(ErrorCode::kFormat, "metrics report is not a JSON object");
  MetricsReport r;
  try {
    r.accuracy = j.at("accuracy").get<double>();
    r.precision_macro = j.at("precision_macro").get<double>();
    r.recall_macro = j.at("recall_macro").get<double>();
    r.f1_macro = j.at("f1_macro").get<double>();
    r.roc_auc_macro = j.at("roc_auc_macro").get<double>();
    r.rmse = j.at("rmse").get<double>();
    r.mae = j.at("mae").get<double>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("metrics report: ") + e.what());
  }
  return r;
}

}  // namespace agro
