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
#include "agrosense/soil.hpp"

#include "agrosense/error.hpp"

namespace agro {

std::vector<LayerSpec> soil_cnn_layers(const SoilCnnConfig& config) {
  if (config.class_count == 0) raise(ErrorCode::kContract, "soil CNN needs at least one class");
  std::vector<LayerSpec> layers;
  for (const auto& block : config.blocks) {
    if (block.residual) {
      layers.push_back(LayerSpec::conv2d(block.channels, 3, 1, true));
      layers.push_back(LayerSpec::relu());
      const std::size_t skip = layers.size();  // activation after the relu
      layers.push_back(LayerSpec::conv2d(block.channels, 3, 1, true));
      layers.push_back(LayerSpec::residual_add(skip));
      layers.push_back(LayerSpec::relu());
    } else {
      layers.push_back(LayerSpec::conv2d(block.channels, 3));
      layers.push_back(LayerSpec::relu());
    }
    layers.push_back(LayerSpec::maxpool2d(2));
  }
  layers.push_back(LayerSpec::flatten());
  layers.push_back(LayerSpec::dense(config.head));
  layers.push_back(LayerSpec::relu());
  layers.push_back(LayerSpec::dense(config.class_count));
  return layers;
}

Network build_soil_cnn(const SoilCnnConfig& config, const ImagePreprocessConfig& image, std::uint64_t seed) {
  return Network(Shape{3, image.height, image.width}, soil_cnn_layers(config), seed);
}

SoilCnnResult train_soil_cnn(const Dataset& dataset, const SplitAssignment& split, const SoilCnnConfig& cnn,
                             const SoilTrainConfig& config) {
  if (split.train.empty()) raise(ErrorCode::kEmptyDataset, "soil CNN training split is empty");
  auto gather = [&](const std::vector<std::size_t>& idx, std::vector<Tensor>& x, std::vector<int>& y) {
    for (auto i : idx) {
      const auto& s = dataset.samples.at(i);
      if (!s.soil_class) raise(ErrorCode::kContract, "sample '" + s.id + "' lacks a soil label");
      x.push_back(preprocess_image(s.image, config.image));
      y.push_back(*s.soil_class);
    }
  };
  std::vector<Tensor> train_x, val_x;
  std::vector<int> train_y, val_y;
  gather(split.train, train_x, train_y);
  gather(split.val, val_x, val_y);

  SoilCnnResult result{build_soil_cnn(cnn, config.image, config.train.seed), {}};
  AugmentFn aug;
  if (config.augment) {
    aug = [&](const Tensor& t, std::size_t epoch, std::size_t idx) {
      auto rng = augment_stream(config.policy, epoch, idx);
      return augment(t, config.policy, rng);
    };
  }
  result.history = fit_classifier(result.network, train_x, train_y, val_x, val_y, config.train, aug);
  return result;
}

SoilPrediction classify_soil(const Network& model, const Tensor& image) {
  SoilPrediction out;
  out.probabilities = softmax(model.logits(image).data);
  const std::size_t best = argmax(out.probabilities);
  out.soil_class = static_cast<int>(best);
  out.confidence = out.probabilities[best];
  out.one_hot = one_hot(out.soil_class, out.probabilities.size());
  return out;
}

SoilPrediction classify_with_feedback(const Network& model, const Tensor& image, const FeedbackConfig& config) {
  if (config.n_tta < 1) raise(ErrorCode::kContract, "n_tta must be >= 1");
  auto plain = classify_soil(model, image);
  if (plain.confidence >= config.threshold) return plain;

  std::vector<double> mean(plain.probabilities.size(), 0.0);
  for (std::size_t k = 0; k < config.n_tta; ++k) {
    Rng rng(derive_seed(config.seed, {k, 0x747461ULL}));
    const auto probs = softmax(model.logits(augment(image, config.policy, rng)).data);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += probs[j];
  }
  for (double& v : mean) v /= static_cast<double>(config.n_tta);
  SoilPrediction out;
  const std::size_t best = argmax(mean);
  out.soil_class = static_cast<int>(best);
  out.confidence = mean[best];
  out.probabilities = std::move(mean);
  out.one_hot = one_hot(out.soil_class, out.probabilities.size());
  out.low_confidence = true;
  return out;
}

}  // namespace agro
