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
#include "agrosense/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agrosense/error.hpp"
#include "agrosense/nn.hpp"

namespace agro {

void GbdtParams::validate() const {
  if (rounds < 1) raise(ErrorCode::kConfig, "gbdt rounds must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) raise(ErrorCode::kConfig, "gbdt learning rate must be in (0,1]");
  if (max_depth < 1) raise(ErrorCode::kConfig, "gbdt max depth must be >= 1");
  if (!(lambda >= 0.0)) raise(ErrorCode::kConfig, "gbdt lambda must be >= 0");
  if (!(gamma >= 0.0)) raise(ErrorCode::kConfig, "gbdt gamma must be >= 0");
  if (!(min_child_hessian >= 0.0)) raise(ErrorCode::kConfig, "gbdt min child hessian must be >= 0");
}

double DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
  }
  return nodes[i].weight;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::vector<double> GbdtModel::scores(std::span<const double> x) const {
  if (x.size() != feature_count) {
    raise(ErrorCode::kSchema, "gbdt expects " + std::to_string(feature_count) + " features, got " +
                                  std::to_string(x.size()));
  }
  std::vector<double> s = base_score;
  for (std::size_t t = 0; t < trees.size(); ++t) s[t % class_count] += learning_rate * trees[t].predict(x);
  return s;
}

std::optional<SplitCandidate> best_split(std::span<const double> values, std::span<const double> gradients,
                                         std::span<const double> hessians, const GbdtParams& params) {
  const std::size_t n = values.size();
  if (gradients.size() != n || hessians.size() != n) raise(ErrorCode::kContract, "split arrays differ in length");
  if (n < 2) return std::nullopt;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

  double g_total = 0.0, h_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g_total += gradients[i];
    h_total += hessians[i];
  }
  const double parent = g_total * g_total / (h_total + params.lambda);

  std::optional<SplitCandidate> best;
  double g_left = 0.0, h_left = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    g_left += gradients[order[k]];
    h_left += hessians[order[k]];
    const double lo = values[order[k]];
    const double hi = values[order[k + 1]];
    if (!(hi > lo)) continue;
    const double h_right = h_total - h_left;
    if (h_left < params.min_child_hessian || h_right < params.min_child_hessian) continue;
    const double g_right = g_total - g_left;
    const double gain = 0.5 * (g_left * g_left / (h_left + params.lambda) +
                               g_right * g_right / (h_right + params.lambda) - parent) -
                        params.gamma;
    if (!(gain > 0.0)) continue;
    if (!best || gain > best->gain) {
      double mid = lo + (hi - lo) / 2.0;
      if (!(mid > lo)) mid = hi;
      best = SplitCandidate{mid, gain};
    }
  }
  return best;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> g, std::span<const double> h, const GbdtParams& params)
      : x_(x), g_(g), h_(h), params_(params) {}

  DecisionTree build(const std::vector<std::size_t>& rows) {
    DecisionTree tree;
    grow(tree, rows, 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, const std::vector<std::size_t>& rows, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double gs = 0.0, hs = 0.0;
    for (auto r : rows) {
      gs += g_[r];
      hs += h_[r];
    }
    const double denom = hs + params_.lambda;
    const double leaf_weight = denom > 0.0 ? -gs / denom : 0.0;

    int best_feature = -1;
    SplitCandidate best;
    if (depth < params_.max_depth && rows.size() >= 2) {
      std::vector<double> v(rows.size()), gv(rows.size()), hv(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        gv[i] = g_[rows[i]];
        hv[i] = h_[rows[i]];
      }
      for (std::size_t f = 0; f < x_.cols; ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) v[i] = x_(rows[i], f);
        if (auto cand = best_split(v, gv, hv, params_); cand && (best_feature < 0 || cand->gain > best.gain)) {
          best = *cand;
          best_feature = static_cast<int>(f);
        }
      }
    }
    if (best_feature < 0) {
      tree.nodes[static_cast<std::size_t>(id)].weight = leaf_weight;
      return id;
    }
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (x_(r, static_cast<std::size_t>(best_feature)) < best.threshold ? left : right).push_back(r);
    }
    const int l = grow(tree, left, depth + 1);
    const int rgt = grow(tree, right, depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = rgt;
    node.weight = leaf_weight;
    return id;
  }

  const Matrix& x_;
  std::span<const double> g_;
  std::span<const double> h_;
  const GbdtParams& params_;
};

double mean_cross_entropy(const Matrix& scores, std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.rows; ++i) {
    loss += softmax_cross_entropy(scores.row(i), labels[i]).loss;
  }
  return loss / static_cast<double>(scores.rows);
}

}  // namespace

GbdtFit fit_gbdt(const Matrix& features, std::span<const int> labels, const GbdtParams& params,
                 std::size_t class_count) {
  params.validate();
  if (class_count < 1) raise(ErrorCode::kContract, "gbdt needs at least one class");
  if (features.rows != labels.size()) raise(ErrorCode::kContract, "feature rows and labels differ in count");
  if (features.rows < 2) raise(ErrorCode::kDegenerateData, "gbdt needs at least 2 samples");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= class_count) raise(ErrorCode::kBounds, "label outside [0, c)");
  }
  const std::size_t n = features.rows;
  const std::size_t c = class_count;

  GbdtFit fit;
  auto& model = fit.model;
  model.class_count = c;
  model.feature_count = features.cols;
  model.learning_rate = params.learning_rate;
  model.base_score.assign(c, 0.0);
  {
    std::vector<double> counts(c, 0.0);
    for (int l : labels) counts[static_cast<std::size_t>(l)] += 1.0;
    for (std::size_t k = 0; k < c; ++k) {
      model.base_score[k] = std::log(std::max(counts[k] / static_cast<double>(n), kProbabilityFloor));
    }
  }

  Matrix scores(n, c);
  for (std::size_t i = 0; i < n; ++i) std::copy(model.base_score.begin(), model.base_score.end(), scores.row(i).begin());
  fit.loss_trace.push_back(mean_cross_entropy(scores, labels));

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> g(n), h(n);
  Matrix probs(n, c);
  for (std::size_t round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = softmax(scores.row(i));
      std::copy(p.begin(), p.end(), probs.row(i).begin());
    }
    std::vector<DecisionTree> round_trees;
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = probs(i, k);
        g[i] = p - (static_cast<std::size_t>(labels[i]) == k ? 1.0 : 0.0);
        h[i] = p * (1.0 - p);
      }
      round_trees.push_back(TreeBuilder(features, g, h, params).build(all));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < c; ++k) scores(i, k) += params.learning_rate * round_trees[k].predict(features.row(i));
    }
    for (auto& t : round_trees) model.trees.push_back(std::move(t));
    fit.loss_trace.push_back(mean_cross_entropy(scores, labels));
  }
  return fit;
}

Matrix predict_gbdt(const GbdtModel& model, const Matrix& features) {
  if (features.cols != model.feature_count) {
    raise(ErrorCode::kSchema, "gbdt expects " + std::to_string(model.feature_count) + " features, got " +
                                  std::to_string(features.cols));
  }
  Matrix out(features.rows, model.class_count);
  for (std::size_t i = 0; i < features.rows; ++i) {
    const auto p = softmax(model.scores(features.row(i)));
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace agro
