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
#include "agrosense/pipeline.hpp"

#include <algorithm>

#include "agrosense/error.hpp"
#include "agrosense/rng.hpp"

namespace agro {

void apply_seed(PipelineConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.soil.train.seed = derive_seed(seed, {1});
  config.soil.policy.seed = derive_seed(seed, {2});
  config.recommender.seed = derive_seed(seed, {3});
  config.feedback.seed = derive_seed(seed, {4});
}

SplitAssignment pipeline_split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed) {
  return stratified_split(dataset, ratios, derive_seed(seed, {0x73706c6974ULL}), StratifyBy::kCrop);
}

namespace {

template <typename F>
auto in_stage(std::string_view stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    rethrow_in_stage(e, stage);
  }
}

Matrix fused_rows(const TrainedPipeline& p, const Dataset& dataset, std::span<const std::size_t> indices) {
  Matrix out;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto& s = dataset.samples[indices[r]];
    const auto tab = tabular_features(p, s.profile);
    const auto soil = soil_features(p, s.image);
    const auto f = fused_features(p, tab, soil);
    if (r == 0) out = Matrix(indices.size(), f.size());
    std::copy(f.begin(), f.end(), out.row(r).begin());
  }
  return out;
}

std::vector<int> crops_of(const Dataset& dataset, std::span<const std::size_t> indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    const auto& s = dataset.samples[i];
    if (!s.crop) raise(ErrorCode::kContract, "sample " + s.id + " has no crop label");
    out.push_back(*s.crop);
  }
  return out;
}

}  // namespace

PipelineFit train_pipeline(const Dataset& dataset, const SplitAssignment& split, const PipelineConfig& config) {
  if (split.train.empty()) raise(ErrorCode::kEmptyDataset, "training split is empty");
  dataset.validate();

  PipelineFit fit;
  auto& p = fit.pipeline;
  p.schema = dataset.schema;
  p.soil_vocab = dataset.soil_vocab;
  p.crop_vocab = dataset.crop_vocab;
  p.image = config.soil.image;
  p.cnn_config = config.cnn;
  p.cnn_config.class_count = dataset.soil_vocab.size();
  p.fusion = config.fusion;
  p.feedback = config.feedback;
  p.split = config.split;
  p.seed = config.seed;

  const auto train_profiles = dataset.profiles(split.train);
  p.imputer = in_stage("impute", [&] { return fit_imputer(train_profiles, p.schema, config.impute); });
  p.scaler = in_stage("standardize", [&] { return fit_scaler(impute(train_profiles, p.imputer), config.scaler); });

  auto cnn = in_stage("classify_soil", [&] { return train_soil_cnn(dataset, split, p.cnn_config, config.soil); });
  p.cnn = std::move(cnn.network);
  fit.report.soil_history = std::move(cnn.history);

  const Matrix train_x = fused_rows(p, dataset, split.train);
  const auto train_y = crops_of(dataset, split.train);
  Matrix val_x;
  std::vector<int> val_y;
  if (!split.val.empty()) {
    val_x = fused_rows(p, dataset, split.val);
    val_y = crops_of(dataset, split.val);
  }
  auto rec = in_stage("recommend", [&] {
    return train_recommender(train_x, train_y, p.crop_vocab, config.recommender, split.val.empty() ? nullptr : &val_x,
                             val_y);
  });
  p.recommender = std::move(rec.model);
  fit.report.recommender_history = std::move(rec.history);
  fit.report.cv = std::move(rec.cv);
  fit.report.warnings = split.warnings;
  fit.report.warnings.insert(fit.report.warnings.end(), rec.warnings.begin(), rec.warnings.end());
  return fit;
}

std::vector<double> tabular_features(const TrainedPipeline& pipeline, const NutrientProfile& profile) {
  const auto filled = in_stage("impute", [&] {
    validate_profile(profile, pipeline.schema);
    return impute(profile, pipeline.imputer);
  });
  return in_stage("standardize", [&] { return transform(filled, pipeline.scaler); });
}

SoilPrediction soil_features(const TrainedPipeline& pipeline, const SoilImage& image) {
  const Tensor x = in_stage("preprocess_image", [&] { return preprocess_image(image, pipeline.image); });
  return in_stage("classify_soil", [&] { return classify_with_feedback(pipeline.cnn, x, pipeline.feedback); });
}

std::vector<double> fused_features(const TrainedPipeline& pipeline, std::span<const double> tabular,
                                   const SoilPrediction& soil) {
  return in_stage("fuse", [&] {
    return pipeline.fusion == FusionMode::kHard ? fuse(tabular, soil.one_hot) : fuse_soft(tabular, soil.probabilities);
  });
}

Recommendation predict_pipeline(const TrainedPipeline& pipeline, const SoilImage& image,
                                const NutrientProfile& profile) {
  const auto tab = tabular_features(pipeline, profile);
  const auto soil = soil_features(pipeline, image);
  const auto fused = fused_features(pipeline, tab, soil);
  Recommendation r = in_stage("recommend", [&] { return recommend(pipeline.recommender, fused); });
  r.soil_class = soil.soil_class;
  r.soil_name = pipeline.soil_vocab.name(soil.soil_class);
  r.soil_confidence = soil.confidence;
  r.low_confidence = soil.low_confidence;
  return r;
}

PipelineEvaluation evaluate_pipeline(const TrainedPipeline& pipeline, const Dataset& dataset,
                                     std::span<const std::size_t> indices) {
  if (indices.empty()) raise(ErrorCode::kEmptyDataset, "evaluation set is empty");
  PipelineEvaluation out;
  for (int y : crops_of(dataset, indices)) {
    out.truth.push_back(pipeline.crop_vocab.index_of(dataset.crop_vocab.name(y)));
  }
  const std::size_t c = pipeline.crop_vocab.size();
  Matrix probs(indices.size(), c);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto& s = dataset.samples[indices[r]];
    auto rec = predict_pipeline(pipeline, s.image, s.profile);
    std::copy(rec.distribution.begin(), rec.distribution.end(), probs.row(r).begin());
    out.predictions.push_back(std::move(rec));
  }
  out.metrics = evaluate_predictions(out.truth, probs, c);
  return out;
}

}  // namespace agro
