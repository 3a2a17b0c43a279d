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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace agro {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_to_string(const Shape& shape);

struct Tensor {
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0) : shape(std::move(s)), data(shape_size(shape), fill) {}
  Tensor(Shape s, std::vector<double> d);

  std::size_t size() const { return data.size(); }
  bool operator==(const Tensor&) const = default;
};

enum class LayerKind { kDense, kConv2d, kMaxPool2d, kRelu, kFlatten, kResidualAdd };

// Activations are numbered from the network input (0); layer i produces
// activation i + 1. A residual-add layer sums its input with activation
// `residual_from`.
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  std::size_t units = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_h = 3;
  std::size_t kernel_w = 3;
  std::size_t stride = 1;
  bool same_padding = false;
  std::size_t pool = 2;
  std::size_t residual_from = 0;

  static LayerSpec dense(std::size_t units);
  static LayerSpec conv2d(std::size_t out_channels, std::size_t kernel, std::size_t stride = 1, bool same = false);
  static LayerSpec maxpool2d(std::size_t pool);
  static LayerSpec relu();
  static LayerSpec flatten();
  static LayerSpec residual_add(std::size_t from_activation);

  bool operator==(const LayerSpec&) const = default;
};

class Network;

// Activations and pooling routes of one forward pass.
struct ForwardPass {
  std::vector<Tensor> activations;
  std::vector<std::vector<std::size_t>> pool_argmax;
  const Network* owner = nullptr;
  std::uint64_t generation = 0;

  const Tensor& output() const { return activations.back(); }
};

class Network {
 public:
  Network() = default;
  // He-uniform weights and zero biases drawn from `seed`.
  Network(Shape input_shape, std::vector<LayerSpec> layers, std::uint64_t seed);
  // Adopts existing parameters (deserialization); shapes are validated.
  Network(Shape input_shape, std::vector<LayerSpec> layers, std::vector<Tensor> parameters);

  const Shape& input_shape() const { return input_shape_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t output_size() const;
  std::size_t parameter_count() const;

  const std::vector<Tensor>& parameters() const { return params_; }
  // Any forward pass taken before this call becomes stale.
  std::vector<Tensor>& mutable_parameters() {
    ++generation_;
    return params_;
  }

  ForwardPass forward(const Tensor& input) const;
  Tensor logits(const Tensor& input) const { return forward(input).output(); }

  // Gradients of the loss with respect to every parameter tensor, given the
  // loss gradient at the network output.
  std::vector<Tensor> backward(const ForwardPass& pass, std::span<const double> grad_output) const;

 private:
  struct Slot {
    Shape in;
    Shape out;
    std::size_t param_index = 0;  // weight at params_[param_index], bias after it
    bool has_params = false;
  };

  void plan();

  Shape input_shape_;
  std::vector<LayerSpec> layers_;
  std::vector<Slot> slots_;
  std::vector<Tensor> params_;
  std::uint64_t generation_ = 0;
};

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

std::size_t argmax(std::span<const double> values);

inline constexpr double kProbabilityFloor = 1e-12;

// -log(p_true) for a one-hot target; throws on an invalid target.
double cross_entropy(std::span<const double> probabilities, std::span<const double> one_hot_target);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logits = p - y
};

LossAndGradient softmax_cross_entropy(std::span<const double> logits, int label);

enum class OptimizerKind { kSgdMomentum, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const OptimizerConfig&) const = default;
};

class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const std::vector<Tensor>& parameters);

  // Throws a numerical error, leaving parameters untouched, if any gradient
  // entry is not finite.
  void step(std::vector<Tensor>& parameters, const std::vector<Tensor>& gradients);

  double lr() const { return config_.lr; }
  void set_lr(double lr);
  OptimizerKind kind() const { return config_.kind; }
  std::uint64_t steps() const { return steps_; }

 private:
  OptimizerConfig config_;
  std::vector<Tensor> first_;   // velocity (sgd) or m (adam)
  std::vector<Tensor> second_;  // v (adam)
  std::uint64_t steps_ = 0;
};

struct SchedulerConfig {
  double factor = 0.5;
  std::size_t patience = 3;
  double min_delta = 1e-4;
  double min_lr = 1e-6;

  bool operator==(const SchedulerConfig&) const = default;
};

// Reduce-on-plateau: an epoch improves when loss < best - min_delta.
class PlateauScheduler {
 public:
  PlateauScheduler(const SchedulerConfig& config, double initial_lr);

  // Returns the learning rate to use from the next epoch on.
  double step(double loss);

  double lr() const { return lr_; }
  double best() const { return best_; }
  std::size_t stalled() const { return counter_; }
  std::size_t reductions() const { return reductions_; }
  bool reduced_last_step() const { return reduced_last_; }

 private:
  SchedulerConfig config_;
  double lr_;
  double best_;
  std::size_t counter_ = 0;
  std::size_t reductions_ = 0;
  bool reduced_last_ = false;
};

double sample_loss(const Network& net, const Tensor& input, int label);

// Central-difference gradient of the cross-entropy loss for every parameter.
std::vector<Tensor> numerical_gradient(const Network& net, const Tensor& input, int label, double eps = 1e-5);

// max |a - n| / max(|a|, |n|, 1e-8) over all entries.
double relative_gradient_error(const std::vector<Tensor>& analytic, const std::vector<Tensor>& numeric);

double gradient_check(const Network& net, const Tensor& input, int label, double eps = 1e-5);

}  // namespace agro
