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
#include "agrosense/trainer.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "agrosense/error.hpp"
#include "agrosense/rng.hpp"

namespace agro {

namespace {

void check_labels(std::span<const Tensor> inputs, std::span<const int> labels, std::size_t classes) {
  if (inputs.size() != labels.size()) raise(ErrorCode::kContract, "input and label counts differ");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= classes) {
      raise(ErrorCode::kBounds, "label " + std::to_string(l) + " outside network output range");
    }
  }
}

void accumulate(std::vector<Tensor>& total, const std::vector<Tensor>& add) {
  for (std::size_t i = 0; i < total.size(); ++i) {
    auto& t = total[i].data;
    const auto& a = add[i].data;
    for (std::size_t j = 0; j < t.size(); ++j) t[j] += a[j];
  }
}

// Mean gradient and mean loss over a batch.
double batch_gradient(const Network& net, std::span<const Tensor> inputs, std::span<const int> labels,
                      std::vector<Tensor>& grads) {
  grads.clear();
  for (const auto& p : net.parameters()) grads.emplace_back(p.shape);
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto pass = net.forward(inputs[i]);
    const auto lg = softmax_cross_entropy(pass.output().data, labels[i]);
    loss += lg.loss;
    accumulate(grads, net.backward(pass, lg.grad));
  }
  const double scale = 1.0 / static_cast<double>(inputs.size());
  for (auto& g : grads) {
    for (double& v : g.data) v *= scale;
  }
  return loss * scale;
}

}  // namespace

double batch_loss(const Network& net, std::span<const Tensor> inputs, std::span<const int> labels) {
  return evaluate_classifier(net, inputs, labels).loss;
}

LossAccuracy evaluate_classifier(const Network& net, std::span<const Tensor> inputs, std::span<const int> labels) {
  check_labels(inputs, labels, net.output_size());
  LossAccuracy out;
  if (inputs.empty()) return out;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto logits = net.logits(inputs[i]);
    const auto lg = softmax_cross_entropy(logits.data, labels[i]);
    out.loss += lg.loss;
    if (argmax(logits.data) == static_cast<std::size_t>(labels[i])) ++correct;
  }
  out.loss /= static_cast<double>(inputs.size());
  out.accuracy = static_cast<double>(correct) / static_cast<double>(inputs.size());
  return out;
}

double train_step(Network& net, Optimizer& optimizer, std::span<const Tensor> inputs, std::span<const int> labels) {
  check_labels(inputs, labels, net.output_size());
  if (inputs.empty()) raise(ErrorCode::kEmptyDataset, "empty batch");
  std::vector<Tensor> grads;
  const double loss = batch_gradient(net, inputs, labels, grads);
  optimizer.step(net.mutable_parameters(), grads);
  return loss;
}

TrainHistory fit_classifier(Network& net, std::span<const Tensor> inputs, std::span<const int> labels,
                            std::span<const Tensor> val_inputs, std::span<const int> val_labels,
                            const TrainConfig& config, const AugmentFn& augment) {
  check_labels(inputs, labels, net.output_size());
  check_labels(val_inputs, val_labels, net.output_size());
  if (inputs.empty()) raise(ErrorCode::kEmptyDataset, "empty training set");
  if (config.batch_size == 0) raise(ErrorCode::kContract, "batch size must be >= 1");

  Optimizer optimizer(config.optimizer, net.parameters());
  PlateauScheduler scheduler(config.scheduler, config.optimizer.lr);
  optimizer.set_lr(scheduler.lr());

  TrainHistory history;
  history.monitored_train_loss = val_inputs.empty();
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best_params = net.parameters();

  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tensor> batch_inputs;
  std::vector<int> batch_labels;
  std::vector<Tensor> grads;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, {epoch, 0x65706f6368ULL}));
    rng.shuffle(std::span(order));
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = optimizer.lr();
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch_inputs.clear();
      batch_labels.clear();
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        batch_inputs.push_back(augment ? augment(inputs[idx], epoch, idx) : inputs[idx]);
        batch_labels.push_back(labels[idx]);
      }
      double loss = 0.0;
      try {
        loss = batch_gradient(net, batch_inputs, batch_labels, grads);
        optimizer.step(net.mutable_parameters(), grads);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kNumerical) {
          raise(ErrorCode::kNumerical, "training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
        }
        throw;
      }
      if (!std::isfinite(loss)) raise(ErrorCode::kNumerical, "training diverged at epoch " + std::to_string(epoch));
      loss_sum += loss * static_cast<double>(end - start);
    }
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    double monitored = rec.train_loss;
    if (!val_inputs.empty()) {
      const auto val = evaluate_classifier(net, val_inputs, val_labels);
      rec.val_loss = val.loss;
      rec.val_accuracy = val.accuracy;
      monitored = val.loss;
    }
    if (!std::isfinite(monitored)) raise(ErrorCode::kNumerical, "training diverged at epoch " + std::to_string(epoch));
    if (monitored < best_loss) {
      best_loss = monitored;
      history.best_epoch = epoch;
      best_params = net.parameters();
    }
    optimizer.set_lr(scheduler.step(monitored));
    rec.lr_reduced = scheduler.reduced_last_step();
    history.epochs.push_back(rec);
  }
  history.lr_reductions = scheduler.reductions();
  if (config.keep_best && !history.epochs.empty()) net.mutable_parameters() = best_params;
  return history;
}

}  // namespace agro
