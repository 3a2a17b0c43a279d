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
#include <functional>
#include <span>
#include <vector>

#include "agrosense/nn.hpp"

namespace agro {

struct TrainConfig {
  std::size_t epochs = 15;
  std::size_t batch_size = 32;
  OptimizerConfig optimizer;
  SchedulerConfig scheduler;
  std::uint64_t seed = 0;
  // Restore the parameters of the epoch with the lowest monitored loss.
  bool keep_best = true;

  bool operator==(const TrainConfig&) const = default;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double lr = 0.0;  // rate used during this epoch
  bool lr_reduced = false;

  bool operator==(const EpochRecord&) const = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  std::size_t lr_reductions = 0;
  // True when no validation set was given and train loss was monitored.
  bool monitored_train_loss = false;

  bool operator==(const TrainHistory&) const = default;
};

// Maps (input, epoch, sample index) to the tensor used for that visit.
using AugmentFn = std::function<Tensor(const Tensor&, std::size_t, std::size_t)>;

struct LossAccuracy {
  double loss = 0.0;
  double accuracy = 0.0;
};

LossAccuracy evaluate_classifier(const Network& net, std::span<const Tensor> inputs, std::span<const int> labels);

// Mini-batch training on mean softmax cross-entropy, reshuffled every epoch
// from `config.seed`, with a plateau scheduler stepped once per epoch on the
// validation loss (or train loss when no validation data is given).
TrainHistory fit_classifier(Network& net, std::span<const Tensor> inputs, std::span<const int> labels,
                            std::span<const Tensor> val_inputs, std::span<const int> val_labels,
                            const TrainConfig& config, const AugmentFn& augment = {});

// One optimizer step on a fixed batch; returns the batch loss before the step.
double train_step(Network& net, Optimizer& optimizer, std::span<const Tensor> inputs, std::span<const int> labels);

double batch_loss(const Network& net, std::span<const Tensor> inputs, std::span<const int> labels);

}  // namespace agro
