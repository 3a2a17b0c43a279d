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
#include <vector>

#include "agrosense/data.hpp"
#include "agrosense/image.hpp"
#include "agrosense/metrics.hpp"
#include "agrosense/recommender.hpp"
#include "agrosense/soil.hpp"
#include "agrosense/tabular.hpp"

namespace agro {

enum class FusionMode { kHard, kSoft };

// Every knob of a pipeline training run.
struct PipelineConfig {
  ImputeStrategy impute = ImputeStrategy::kMean;
  ScalerKind scaler = ScalerKind::kZScore;
  SoilCnnConfig cnn;
  SoilTrainConfig soil;
  RecommenderConfig recommender;
  FusionMode fusion = FusionMode::kHard;
  FeedbackConfig feedback;
  SplitRatios split;
  std::uint64_t seed = 42;
};

// Re-derives every component seed from `seed`.
void apply_seed(PipelineConfig& config, std::uint64_t seed);

// Complete inference state: preprocessing statistics, soil CNN, recommender
// and label vocabularies.
struct TrainedPipeline {
  Schema schema;
  Vocabulary soil_vocab;
  Vocabulary crop_vocab;
  ImputerModel imputer;
  ScalerModel scaler;
  ImagePreprocessConfig image;
  SoilCnnConfig cnn_config;
  Network cnn;
  RecommenderModel recommender;
  FusionMode fusion = FusionMode::kHard;
  FeedbackConfig feedback;
  SplitRatios split;
  std::uint64_t seed = 0;
};

struct PipelineTrainReport {
  TrainHistory soil_history;
  std::optional<TrainHistory> recommender_history;
  std::optional<CvReport> cv;
  std::vector<std::string> warnings;
};

struct PipelineFit {
  TrainedPipeline pipeline;
  PipelineTrainReport report;
};

// The crop-stratified split used everywhere a seed picks train and test rows.
SplitAssignment pipeline_split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed);

PipelineFit train_pipeline(const Dataset& dataset, const SplitAssignment& split, const PipelineConfig& config);

// Standardized tabular features of one raw profile (impute, then scale).
std::vector<double> tabular_features(const TrainedPipeline& pipeline, const NutrientProfile& profile);
// Soil prediction of one raw image, with the low-confidence feedback loop.
SoilPrediction soil_features(const TrainedPipeline& pipeline, const SoilImage& image);
// Concatenation under the pipeline's fusion mode.
std::vector<double> fused_features(const TrainedPipeline& pipeline, std::span<const double> tabular,
                                   const SoilPrediction& soil);

// Errors carry the failing stage name as a message prefix.
Recommendation predict_pipeline(const TrainedPipeline& pipeline, const SoilImage& image,
                                const NutrientProfile& profile);

struct PipelineEvaluation {
  MetricsReport metrics;
  std::vector<int> truth;
  std::vector<Recommendation> predictions;
};

PipelineEvaluation evaluate_pipeline(const TrainedPipeline& pipeline, const Dataset& dataset,
                                     std::span<const std::size_t> indices);

}  // namespace agro
