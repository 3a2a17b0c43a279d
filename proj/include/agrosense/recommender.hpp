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
#include <span>
#include <string>
#include <vector>

#include "agrosense/data.hpp"
#include "agrosense/gbdt.hpp"
#include "agrosense/matrix.hpp"
#include "agrosense/nn.hpp"
#include "agrosense/trainer.hpp"

namespace agro {

// [tabular || soil one-hot]; throws a contract error if the one-hot segment is
// not binary with a single 1.
std::vector<double> fuse(std::span<const double> tabular, std::span<const double> soil_one_hot);

// [tabular || soil probabilities], for the soft-fusion ablation.
std::vector<double> fuse_soft(std::span<const double> tabular, std::span<const double> soil_probabilities);

enum class Backend { kMlp, kGbdt };

struct MlpConfig {
  std::size_t hidden = 64;
  TrainConfig train = [] {
    TrainConfig t;
    t.epochs = 60;
    return t;
  }();

  bool operator==(const MlpConfig&) const = default;
};

struct RecommenderConfig {
  Backend backend = Backend::kMlp;
  MlpConfig mlp;
  GbdtParams gbdt;
  std::size_t kfold = 0;  // 0 disables the cross-validation report
  std::uint64_t seed = 0;

  bool operator==(const RecommenderConfig&) const = default;
};

struct RecommenderModel {
  Backend backend = Backend::kMlp;
  Network mlp;       // valid when backend == kMlp
  GbdtModel gbdt;    // valid when backend == kGbdt
  Vocabulary crop_vocab;
  std::size_t input_size = 0;

  std::size_t class_count() const { return crop_vocab.size(); }
  std::vector<double> predict_proba(std::span<const double> fused) const;
  Matrix predict_proba(const Matrix& fused) const;
};

struct FoldScore {
  double accuracy = 0.0;
  double f1_macro = 0.0;
};

struct CvReport {
  std::vector<FoldScore> folds;
  std::vector<std::string> warnings;
  double mean_accuracy = 0.0;
  double mean_f1_macro = 0.0;
};

struct RecommenderFit {
  RecommenderModel model;
  std::optional<CvReport> cv;
  std::optional<TrainHistory> history;  // MLP only
  std::vector<std::string> warnings;
};

// Optional validation rows drive the MLP's plateau scheduler and best-epoch
// selection; without them the training loss is monitored.
RecommenderFit train_recommender(const Matrix& fused, std::span<const int> labels, const Vocabulary& crop_vocab,
                                 const RecommenderConfig& config, const Matrix* val_fused = nullptr,
                                 std::span<const int> val_labels = {});

struct Recommendation {
  int crop = 0;
  std::string crop_name;
  std::vector<double> distribution;
  int soil_class = -1;
  std::string soil_name;
  double soil_confidence = 0.0;
  bool low_confidence = false;

  bool operator==(const Recommendation&) const = default;
};

// Fills crop fields only.
Recommendation recommend(const RecommenderModel& model, std::span<const double> fused);

std::string recommendation_to_json(const Recommendation& r);

}  // namespace agro
