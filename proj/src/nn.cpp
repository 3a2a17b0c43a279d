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
#include "agrosense/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "agrosense/error.hpp"
#include "agrosense/rng.hpp"

namespace agro {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ')';
  return os.str();
}

Tensor::Tensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
  if (data.size() != shape_size(shape)) {
    raise(ErrorCode::kShape, "tensor data length " + std::to_string(data.size()) + " does not match shape " +
                                 shape_to_string(shape));
  }
}

LayerSpec LayerSpec::dense(std::size_t units) {
  LayerSpec s;
  s.kind = LayerKind::kDense;
  s.units = units;
  return s;
}

LayerSpec LayerSpec::conv2d(std::size_t out_channels, std::size_t kernel, std::size_t stride, bool same) {
  LayerSpec s;
  s.kind = LayerKind::kConv2d;
  s.out_channels = out_channels;
  s.kernel_h = s.kernel_w = kernel;
  s.stride = stride;
  s.same_padding = same;
  return s;
}

LayerSpec LayerSpec::maxpool2d(std::size_t pool) {
  LayerSpec s;
  s.kind = LayerKind::kMaxPool2d;
  s.pool = pool;
  return s;
}

LayerSpec LayerSpec::relu() { return LayerSpec{}; }

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::kFlatten;
  return s;
}

LayerSpec LayerSpec::residual_add(std::size_t from_activation) {
  LayerSpec s;
  s.kind = LayerKind::kResidualAdd;
  s.residual_from = from_activation;
  return s;
}

namespace {

struct ConvGeometry {
  std::size_t in_c, in_h, in_w, out_c, out_h, out_w, kh, kw, stride, pad_h, pad_w;
};

ConvGeometry conv_geometry(const LayerSpec& spec, const Shape& in, const Shape& out) {
  return {in[0],
          in[1],
          in[2],
          out[0],
          out[1],
          out[2],
          spec.kernel_h,
          spec.kernel_w,
          spec.stride,
          spec.same_padding ? (spec.kernel_h - 1) / 2 : 0,
          spec.same_padding ? (spec.kernel_w - 1) / 2 : 0};
}

void check_finite(const std::vector<double>& v, const char* where) {
  for (double x : v) {
    if (!std::isfinite(x)) raise(ErrorCode::kNumerical, std::string("non-finite value in ") + where);
  }
}

}  // namespace

Network::Network(Shape input_shape, std::vector<LayerSpec> layers, std::uint64_t seed)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
  plan();
  Rng rng(seed);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& slot = slots_[i];
    if (!slot.has_params) continue;
    auto& w = params_[slot.param_index];
    const std::size_t fan_in = w.size() / w.shape[0];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& x : w.data) x = rng.uniform(-limit, limit);
  }
}

Network::Network(Shape input_shape, std::vector<LayerSpec> layers, std::vector<Tensor> parameters)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
  plan();
  if (parameters.size() != params_.size()) {
    raise(ErrorCode::kShape, "expected " + std::to_string(params_.size()) + " parameter tensors, got " +
                                 std::to_string(parameters.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (parameters[i].shape != params_[i].shape || parameters[i].data.size() != params_[i].data.size()) {
      raise(ErrorCode::kShape, "parameter " + std::to_string(i) + " expected " + shape_to_string(params_[i].shape) +
                                   ", got " + shape_to_string(parameters[i].shape));
    }
    check_finite(parameters[i].data, "parameters");
  }
  params_ = std::move(parameters);
}

void Network::plan() {
  if (input_shape_.empty() || shape_size(input_shape_) == 0) raise(ErrorCode::kShape, "empty network input shape");
  slots_.clear();
  params_.clear();
  std::vector<Shape> act_shapes{input_shape_};
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& spec = layers_[i];
    Slot slot;
    slot.in = act_shapes.back();
    const auto& in = slot.in;
    const std::string where = "layer " + std::to_string(i) + ": ";
    switch (spec.kind) {
      case LayerKind::kDense: {
        if (in.size() != 1) raise(ErrorCode::kShape, where + "dense expects a flat input, got " + shape_to_string(in));
        if (spec.units == 0) raise(ErrorCode::kShape, where + "dense needs units > 0");
        slot.out = {spec.units};
        slot.has_params = true;
        slot.param_index = params_.size();
        params_.emplace_back(Shape{spec.units, in[0]});
        params_.emplace_back(Shape{spec.units});
        break;
      }
      case LayerKind::kConv2d: {
        if (in.size() != 3) raise(ErrorCode::kShape, where + "conv2d expects CxHxW, got " + shape_to_string(in));
        if (spec.out_channels == 0 || spec.kernel_h == 0 || spec.kernel_w == 0 || spec.stride == 0) {
          raise(ErrorCode::kShape, where + "invalid conv2d parameters");
        }
        const std::size_t ph = spec.same_padding ? (spec.kernel_h - 1) / 2 : 0;
        const std::size_t pw = spec.same_padding ? (spec.kernel_w - 1) / 2 : 0;
        if (in[1] + 2 * ph < spec.kernel_h || in[2] + 2 * pw < spec.kernel_w) {
          raise(ErrorCode::kShape, where + "kernel larger than input " + shape_to_string(in));
        }
        slot.out = {spec.out_channels, (in[1] + 2 * ph - spec.kernel_h) / spec.stride + 1,
                    (in[2] + 2 * pw - spec.kernel_w) / spec.stride + 1};
        slot.has_params = true;
        slot.param_index = params_.size();
        params_.emplace_back(Shape{spec.out_channels, in[0], spec.kernel_h, spec.kernel_w});
        params_.emplace_back(Shape{spec.out_channels});
        break;
      }
      case LayerKind::kMaxPool2d:
        if (in.size() != 3) raise(ErrorCode::kShape, where + "maxpool2d expects CxHxW, got " + shape_to_string(in));
        if (spec.pool == 0 || in[1] < spec.pool || in[2] < spec.pool) {
          raise(ErrorCode::kShape, where + "pool window larger than input " + shape_to_string(in));
        }
        slot.out = {in[0], in[1] / spec.pool, in[2] / spec.pool};
        break;
      case LayerKind::kRelu:
        slot.out = in;
        break;
      case LayerKind::kFlatten:
        slot.out = {shape_size(in)};
        break;
      case LayerKind::kResidualAdd:
        if (spec.residual_from >= act_shapes.size()) {
          raise(ErrorCode::kShape, where + "residual source is not an earlier activation");
        }
        if (act_shapes[spec.residual_from] != in) {
          raise(ErrorCode::kShape, where + "residual shapes differ: " + shape_to_string(act_shapes[spec.residual_from]) +
                                       " vs " + shape_to_string(in));
        }
        slot.out = in;
        break;
    }
    act_shapes.push_back(slot.out);
    slots_.push_back(slot);
  }
}

std::size_t Network::output_size() const {
  return slots_.empty() ? shape_size(input_shape_) : shape_size(slots_.back().out);
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.size();
  return n;
}

ForwardPass Network::forward(const Tensor& input) const {
  if (input.shape != input_shape_) {
    raise(ErrorCode::kShape,
          "input shape mismatch: expected " + shape_to_string(input_shape_) + ", got " + shape_to_string(input.shape));
  }
  ForwardPass pass;
  pass.owner = this;
  pass.generation = generation_;
  pass.activations.reserve(layers_.size() + 1);
  pass.pool_argmax.resize(layers_.size());
  pass.activations.push_back(input);

  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& spec = layers_[i];
    const auto& slot = slots_[i];
    const Tensor& x = pass.activations.back();
    Tensor y(slot.out);
    switch (spec.kind) {
      case LayerKind::kDense: {
        const auto& w = params_[slot.param_index].data;
        const auto& b = params_[slot.param_index + 1].data;
        const std::size_t in = slot.in[0];
        for (std::size_t o = 0; o < spec.units; ++o) {
          const double* row = w.data() + o * in;
          double acc = b[o];
          for (std::size_t j = 0; j < in; ++j) acc += row[j] * x.data[j];
          y.data[o] = acc;
        }
        break;
      }
      case LayerKind::kConv2d: {
        const auto g = conv_geometry(spec, slot.in, slot.out);
        const auto& w = params_[slot.param_index].data;
        const auto& b = params_[slot.param_index + 1].data;
        for (std::size_t o = 0; o < g.out_c; ++o) {
          double* out_plane = y.data.data() + o * g.out_h * g.out_w;
          std::fill(out_plane, out_plane + g.out_h * g.out_w, b[o]);
          for (std::size_t c = 0; c < g.in_c; ++c) {
            const double* in_plane = x.data.data() + c * g.in_h * g.in_w;
            for (std::size_t ky = 0; ky < g.kh; ++ky) {
              for (std::size_t kx = 0; kx < g.kw; ++kx) {
                const double wv = w[((o * g.in_c + c) * g.kh + ky) * g.kw + kx];
                for (std::size_t oy = 0; oy < g.out_h; ++oy) {
                  const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad_h);
                  if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
                  const double* in_row = in_plane + static_cast<std::size_t>(iy) * g.in_w;
                  double* out_row = out_plane + oy * g.out_w;
                  for (std::size_t ox = 0; ox < g.out_w; ++ox) {
                    const auto ix =
                        static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad_w);
                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
                    out_row[ox] += wv * in_row[ix];
                  }
                }
              }
            }
          }
        }
        break;
      }
      case LayerKind::kMaxPool2d: {
        const std::size_t c_n = slot.in[0], ih = slot.in[1], iw = slot.in[2];
        const std::size_t oh = slot.out[1], ow = slot.out[2], p = spec.pool;
        auto& route = pass.pool_argmax[i];
        route.resize(y.size());
        for (std::size_t c = 0; c < c_n; ++c) {
          for (std::size_t oy = 0; oy < oh; ++oy) {
            for (std::size_t ox = 0; ox < ow; ++ox) {
              std::size_t best = (c * ih + oy * p) * iw + ox * p;
              for (std::size_t dy = 0; dy < p; ++dy) {
                for (std::size_t dx = 0; dx < p; ++dx) {
                  const std::size_t idx = (c * ih + oy * p + dy) * iw + ox * p + dx;
                  if (x.data[idx] > x.data[best]) best = idx;
                }
              }
              const std::size_t o = (c * oh + oy) * ow + ox;
              y.data[o] = x.data[best];
              route[o] = best;
            }
          }
        }
        break;
      }
      case LayerKind::kRelu:
        for (std::size_t j = 0; j < x.size(); ++j) y.data[j] = x.data[j] > 0.0 ? x.data[j] : 0.0;
        break;
      case LayerKind::kFlatten:
        y.data = x.data;
        break;
      case LayerKind::kResidualAdd: {
        const auto& skip = pass.activations[spec.residual_from];
        for (std::size_t j = 0; j < x.size(); ++j) y.data[j] = x.data[j] + skip.data[j];
        break;
      }
    }
    pass.activations.push_back(std::move(y));
  }
  check_finite(pass.output().data, "forward output");
  return pass;
}

std::vector<Tensor> Network::backward(const ForwardPass& pass, std::span<const double> grad_output) const {
  if (pass.owner != this || pass.generation != generation_ || pass.activations.size() != layers_.size() + 1) {
    raise(ErrorCode::kContract, "stale forward cache: parameters changed since the forward pass");
  }
  if (grad_output.size() != output_size()) {
    raise(ErrorCode::kShape, "output gradient has " + std::to_string(grad_output.size()) + " entries, expected " +
                                 std::to_string(output_size()));
  }
  std::vector<Tensor> grads;
  grads.reserve(params_.size());
  for (const auto& p : params_) grads.emplace_back(p.shape);

  // Gradient w.r.t. every activation; residual sources accumulate from two paths.
  std::vector<std::vector<double>> act_grad(pass.activations.size());
  act_grad.back().assign(grad_output.begin(), grad_output.end());

  for (std::size_t li = layers_.size(); li-- > 0;) {
    const auto& spec = layers_[li];
    const auto& slot = slots_[li];
    const Tensor& x = pass.activations[li];
    const auto& gy = act_grad[li + 1];
    auto& gx = act_grad[li];
    if (gx.empty()) gx.assign(x.size(), 0.0);
    switch (spec.kind) {
      case LayerKind::kDense: {
        const auto& w = params_[slot.param_index].data;
        auto& gw = grads[slot.param_index].data;
        auto& gb = grads[slot.param_index + 1].data;
        const std::size_t in = slot.in[0];
        for (std::size_t o = 0; o < spec.units; ++o) {
          const double g = gy[o];
          gb[o] += g;
          if (g == 0.0) continue;
          const double* row = w.data() + o * in;
          double* grow = gw.data() + o * in;
          for (std::size_t j = 0; j < in; ++j) {
            grow[j] += g * x.data[j];
            gx[j] += g * row[j];
          }
        }
        break;
      }
      case LayerKind::kConv2d: {
        const auto g = conv_geometry(spec, slot.in, slot.out);
        const auto& w = params_[slot.param_index].data;
        auto& gw = grads[slot.param_index].data;
        auto& gb = grads[slot.param_index + 1].data;
        for (std::size_t o = 0; o < g.out_c; ++o) {
          const double* gout = gy.data() + o * g.out_h * g.out_w;
          for (std::size_t j = 0; j < g.out_h * g.out_w; ++j) gb[o] += gout[j];
          for (std::size_t c = 0; c < g.in_c; ++c) {
            const double* in_plane = x.data.data() + c * g.in_h * g.in_w;
            double* gin_plane = gx.data() + c * g.in_h * g.in_w;
            for (std::size_t ky = 0; ky < g.kh; ++ky) {
              for (std::size_t kx = 0; kx < g.kw; ++kx) {
                const std::size_t widx = ((o * g.in_c + c) * g.kh + ky) * g.kw + kx;
                const double wv = w[widx];
                double acc = 0.0;
                for (std::size_t oy = 0; oy < g.out_h; ++oy) {
                  const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad_h);
                  if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
                  const double* in_row = in_plane + static_cast<std::size_t>(iy) * g.in_w;
                  double* gin_row = gin_plane + static_cast<std::size_t>(iy) * g.in_w;
                  const double* gout_row = gout + oy * g.out_w;
                  for (std::size_t ox = 0; ox < g.out_w; ++ox) {
                    const auto ix =
                        static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad_w);
                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
                    acc += gout_row[ox] * in_row[ix];
                    gin_row[ix] += gout_row[ox] * wv;
                  }
                }
                gw[widx] += acc;
              }
            }
          }
        }
        break;
      }
      case LayerKind::kMaxPool2d: {
        const auto& route = pass.pool_argmax[li];
        for (std::size_t o = 0; o < gy.size(); ++o) gx[route[o]] += gy[o];
        break;
      }
      case LayerKind::kRelu:
        for (std::size_t j = 0; j < gy.size(); ++j) {
          if (x.data[j] > 0.0) gx[j] += gy[j];
        }
        break;
      case LayerKind::kFlatten:
        for (std::size_t j = 0; j < gy.size(); ++j) gx[j] += gy[j];
        break;
      case LayerKind::kResidualAdd: {
        for (std::size_t j = 0; j < gy.size(); ++j) gx[j] += gy[j];
        auto& gs = act_grad[spec.residual_from];
        if (gs.empty()) gs.assign(gy.size(), 0.0);
        for (std::size_t j = 0; j < gy.size(); ++j) gs[j] += gy[j];
        break;
      }
    }
  }
  return grads;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  double mx = logits[0];
  for (double v : logits) {
    if (!std::isfinite(v)) raise(ErrorCode::kNumerical, "non-finite logit");
    mx = std::max(mx, v);
  }
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double cross_entropy(std::span<const double> probabilities, std::span<const double> one_hot_target) {
  if (probabilities.size() != one_hot_target.size()) {
    raise(ErrorCode::kContract, "probability and target lengths differ");
  }
  double psum = 0.0;
  for (double p : probabilities) psum += p;
  if (std::abs(psum - 1.0) > 1e-6) raise(ErrorCode::kContract, "probabilities do not sum to 1");
  std::size_t hot = probabilities.size();
  for (std::size_t i = 0; i < one_hot_target.size(); ++i) {
    const double t = one_hot_target[i];
    if (t == 1.0) {
      if (hot != probabilities.size()) raise(ErrorCode::kContract, "target is not one-hot");
      hot = i;
    } else if (t != 0.0) {
      raise(ErrorCode::kContract, "target is not one-hot");
    }
  }
  if (hot == probabilities.size()) raise(ErrorCode::kContract, "target is not one-hot");
  return -std::log(std::max(probabilities[hot], kProbabilityFloor));
}

LossAndGradient softmax_cross_entropy(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    raise(ErrorCode::kBounds, "label " + std::to_string(label) + " out of range");
  }
  LossAndGradient out;
  out.grad = softmax(logits);
  const auto k = static_cast<std::size_t>(label);
  out.loss = -std::log(std::max(out.grad[k], kProbabilityFloor));
  out.grad[k] -= 1.0;
  return out;
}

Optimizer::Optimizer(const OptimizerConfig& config, const std::vector<Tensor>& parameters) : config_(config) {
  if (!(config.lr > 0.0)) raise(ErrorCode::kContract, "learning rate must be positive");
  for (const auto& p : parameters) {
    first_.emplace_back(p.shape);
    if (config.kind == OptimizerKind::kAdam) second_.emplace_back(p.shape);
  }
}

void Optimizer::set_lr(double lr) {
  if (!(lr > 0.0)) raise(ErrorCode::kContract, "learning rate must be positive");
  config_.lr = lr;
}

void Optimizer::step(std::vector<Tensor>& parameters, const std::vector<Tensor>& gradients) {
  if (parameters.size() != first_.size() || gradients.size() != first_.size()) {
    raise(ErrorCode::kShape, "optimizer parameter/gradient count mismatch");
  }
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    if (gradients[i].shape != first_[i].shape || parameters[i].shape != first_[i].shape) {
      raise(ErrorCode::kShape, "optimizer slot " + std::to_string(i) + " shape mismatch");
    }
    for (double g : gradients[i].data) {
      if (!std::isfinite(g)) raise(ErrorCode::kNumerical, "non-finite gradient in optimizer step");
    }
  }
  ++steps_;
  const double lr = config_.lr;
  if (config_.kind == OptimizerKind::kSgdMomentum) {
    for (std::size_t i = 0; i < parameters.size(); ++i) {
      auto& v = first_[i].data;
      auto& theta = parameters[i].data;
      const auto& g = gradients[i].data;
      for (std::size_t j = 0; j < theta.size(); ++j) {
        v[j] = config_.momentum * v[j] + g[j];
        theta[j] -= lr * v[j];
      }
    }
    return;
  }
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    auto& m = first_[i].data;
    auto& v = second_[i].data;
    auto& theta = parameters[i].data;
    const auto& g = gradients[i].data;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g[j];
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g[j] * g[j];
      theta[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + config_.epsilon);
    }
  }
}

PlateauScheduler::PlateauScheduler(const SchedulerConfig& config, double initial_lr)
    : config_(config), lr_(std::max(initial_lr, config.min_lr)), best_(std::numeric_limits<double>::infinity()) {
  if (config.patience == 0) raise(ErrorCode::kContract, "scheduler patience must be >= 1");
  if (!(config.factor > 0.0 && config.factor < 1.0)) raise(ErrorCode::kContract, "scheduler factor must be in (0,1)");
}

double PlateauScheduler::step(double loss) {
  reduced_last_ = false;
  if (!std::isfinite(loss)) raise(ErrorCode::kNumerical, "scheduler received a non-finite loss");
  if (loss < best_ - config_.min_delta) {
    best_ = loss;
    counter_ = 0;
    return lr_;
  }
  if (++counter_ >= config_.patience) {
    const double reduced = std::max(lr_ * config_.factor, config_.min_lr);
    if (reduced < lr_) {
      lr_ = reduced;
      ++reductions_;
      reduced_last_ = true;
    }
    counter_ = 0;
  }
  return lr_;
}

double sample_loss(const Network& net, const Tensor& input, int label) {
  return softmax_cross_entropy(net.logits(input).data, label).loss;
}

std::vector<Tensor> numerical_gradient(const Network& net, const Tensor& input, int label, double eps) {
  Network probe = net;
  std::vector<Tensor> out;
  for (std::size_t i = 0; i < net.parameters().size(); ++i) {
    out.emplace_back(net.parameters()[i].shape);
    for (std::size_t j = 0; j < net.parameters()[i].size(); ++j) {
      const double orig = net.parameters()[i].data[j];
      probe.mutable_parameters()[i].data[j] = orig + eps;
      const double plus = sample_loss(probe, input, label);
      probe.mutable_parameters()[i].data[j] = orig - eps;
      const double minus = sample_loss(probe, input, label);
      probe.mutable_parameters()[i].data[j] = orig;
      out[i].data[j] = (plus - minus) / (2.0 * eps);
    }
  }
  return out;
}

double relative_gradient_error(const std::vector<Tensor>& analytic, const std::vector<Tensor>& numeric) {
  if (analytic.size() != numeric.size()) raise(ErrorCode::kShape, "gradient tensor counts differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    if (analytic[i].size() != numeric[i].size()) raise(ErrorCode::kShape, "gradient tensor sizes differ");
    for (std::size_t j = 0; j < analytic[i].size(); ++j) {
      const double a = analytic[i].data[j];
      const double n = numeric[i].data[j];
      const double denom = std::max({std::abs(a), std::abs(n), 1e-8});
      worst = std::max(worst, std::abs(a - n) / denom);
    }
  }
  return worst;
}

double gradient_check(const Network& net, const Tensor& input, int label, double eps) {
  const auto pass = net.forward(input);
  const auto lg = softmax_cross_entropy(pass.output().data, label);
  const auto analytic = net.backward(pass, lg.grad);
  return relative_gradient_error(analytic, numerical_gradient(net, input, label, eps));
}

}  // namespace agro
