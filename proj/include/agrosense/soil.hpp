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
#include <vector>

#include "agrosense/data.hpp"
#include "agrosense/image.hpp"
#include "agrosense/nn.hpp"
#include "agrosense/trainer.hpp"

namespace agro {

struct ConvBlock {
  std::size_t channels = 8;
  bool residual = false;

  bool operator==(const ConvBlock&) const = default;
};

// Each block is conv3x3-relu-maxpool2x2; a residual block is
// conv3x3(same)-relu-conv3x3(same)+skip-relu-maxpool2x2.
struct SoilCnnConfig {
  std::vector<ConvBlock> blocks{{8, false}, {16, false}};
  std::size_t head = 64;
  std::size_t class_count = 7;

  bool operator==(const SoilCnnConfig&) const = default;
};

std::vector<LayerSpec> soil_cnn_layers(const SoilCnnConfig& config);
Network build_soil_cnn(const SoilCnnConfig& config, const ImagePreprocessConfig& image, std::uint64_t seed);

struct SoilTrainConfig {
  TrainConfig train;
  ImagePreprocessConfig image;
  bool augment = true;
  AugmentPolicy policy;
};

struct SoilCnnResult {
  Network network;
  TrainHistory history;
};

// Trains on split.train, monitoring split.val, with labels taken from each
// sample's soil class. Augmentation applies to training visits only.
SoilCnnResult train_soil_cnn(const Dataset& dataset, const SplitAssignment& split, const SoilCnnConfig& cnn,
                             const SoilTrainConfig& config);

struct SoilPrediction {
  int soil_class = 0;
  double confidence = 0.0;
  std::vector<double> probabilities;
  std::vector<double> one_hot;
  bool low_confidence = false;
};

SoilPrediction classify_soil(const Network& model, const Tensor& image);

struct FeedbackConfig {
  double threshold = 0.6;
  std::size_t n_tta = 8;
  std::uint64_t seed = 0;
  AugmentPolicy policy;

  bool operator==(const FeedbackConfig&) const = default;
};

// Below the confidence threshold, re-evaluates the image by averaging the
// softmax over n_tta augmented copies and flags the result.
SoilPrediction classify_with_feedback(const Network& model, const Tensor& image, const FeedbackConfig& config);

}  // namespace agro
