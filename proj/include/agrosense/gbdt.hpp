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
#include <optional>
#include <span>
#include <vector>

#include "agrosense/matrix.hpp"

namespace agro {

struct GbdtParams {
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  std::size_t max_depth = 4;
  double lambda = 1.0;
  double gamma = 0.0;
  double min_child_hessian = 1.0;

  void validate() const;
  bool operator==(const GbdtParams&) const = default;
};

// Internal nodes route x[feature] < threshold to `left`. Leaves have
// feature == -1. Nodes are stored in preorder.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  std::size_t depth() const;
  bool operator==(const DecisionTree&) const = default;
};

struct GbdtModel {
  std::size_t class_count = 0;
  std::size_t feature_count = 0;
  double learning_rate = 0.1;
  std::vector<double> base_score;    // log class prior
  std::vector<DecisionTree> trees;   // round-major, class_count per round

  std::size_t rounds() const { return class_count ? trees.size() / class_count : 0; }
  std::vector<double> scores(std::span<const double> x) const;
  bool operator==(const GbdtModel&) const = default;
};

struct SplitCandidate {
  double threshold = 0.0;
  double gain = 0.0;
};

// Exact greedy search over midpoints between distinct sorted values, with
// gain = 1/2 [G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)] - gamma.
std::optional<SplitCandidate> best_split(std::span<const double> values, std::span<const double> gradients,
                                         std::span<const double> hessians, const GbdtParams& params);

struct GbdtFit {
  GbdtModel model;
  // Mean training cross-entropy before round 1 and after each round.
  std::vector<double> loss_trace;
};

GbdtFit fit_gbdt(const Matrix& features, std::span<const int> labels, const GbdtParams& params,
                 std::size_t class_count);

Matrix predict_gbdt(const GbdtModel& model, const Matrix& features);

}  // namespace agro
