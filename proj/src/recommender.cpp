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
#include "agrosense/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agrosense/error.hpp"
#include "agrosense/metrics.hpp"
#include "agrosense/rng.hpp"
#include "json.hpp"

namespace agro {

std::vector<double> fuse(std::span<const double> tabular, std::span<const double> soil_one_hot) {
  std::size_t ones = 0;
  for (double v : soil_one_hot) {
    if (v == 1.0) {
      ++ones;
    } else if (v != 0.0) {
      raise(ErrorCode::kContract, "soil one-hot has a non-binary entry");
    }
  }
  if (ones != 1) raise(ErrorCode::kContract, "soil one-hot must contain exactly one 1");
  for (double v : tabular) {
    if (!std::isfinite(v)) raise(ErrorCode::kNumerical, "non-finite tabular feature");
  }
  std::vector<double> out(tabular.begin(), tabular.end());
  out.insert(out.end(), soil_one_hot.begin(), soil_one_hot.end());
  return out;
}

std::vector<double> fuse_soft(std::span<const double> tabular, std::span<const double> soil_probabilities) {
  const double sum = std::accumulate(soil_probabilities.begin(), soil_probabilities.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-6) raise(ErrorCode::kContract, "soil probabilities must sum to 1");
  std::vector<double> out(tabular.begin(), tabular.end());
  out.insert(out.end(), soil_probabilities.begin(), soil_probabilities.end());
  return out;
}

std::vector<double> RecommenderModel::predict_proba(std::span<const double> fused) const {
  if (fused.size() != input_size) {
    raise(ErrorCode::kSchema, "fused vector has length " + std::to_string(fused.size()) + ", model expects " +
                                  std::to_string(input_size));
  }
  if (backend == Backend::kMlp) {
    const Tensor x(Shape{input_size}, std::vector<double>(fused.begin(), fused.end()));
    return softmax(mlp.logits(x).data);
  }
  return softmax(gbdt.scores(fused));
}

Matrix RecommenderModel::predict_proba(const Matrix& fused) const {
  Matrix out(fused.rows, class_count());
  for (std::size_t i = 0; i < fused.rows; ++i) {
    const auto p = predict_proba(fused.row(i));
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return out;
}

namespace {

std::vector<Tensor> rows_as_tensors(const Matrix& m) {
  std::vector<Tensor> out;
  out.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    out.emplace_back(Shape{m.cols}, std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return out;
}

struct FitOnly {
  RecommenderModel model;
  std::optional<TrainHistory> history;
};

FitOnly fit_backend(const Matrix& fused, std::span<const int> labels, const Vocabulary& crop_vocab,
                    const RecommenderConfig& config, const Matrix* val_fused, std::span<const int> val_labels) {
  FitOnly out;
  auto& model = out.model;
  model.backend = config.backend;
  model.crop_vocab = crop_vocab;
  model.input_size = fused.cols;
  const std::size_t c = crop_vocab.size();
  if (config.backend == Backend::kMlp) {
    model.mlp = Network(Shape{fused.cols},
                        {LayerSpec::dense(config.mlp.hidden), LayerSpec::relu(), LayerSpec::dense(c)},
                        derive_seed(config.seed, {0x696e6974ULL}));
    TrainConfig tc = config.mlp.train;
    tc.seed = derive_seed(config.seed, {0x74726eULL});
    const auto x = rows_as_tensors(fused);
    std::vector<Tensor> vx;
    if (val_fused) vx = rows_as_tensors(*val_fused);
    out.history = fit_classifier(model.mlp, x, labels, vx, val_labels, tc);
  } else {
    model.gbdt = fit_gbdt(fused, labels, config.gbdt, c).model;
  }
  return out;
}

}  // namespace

RecommenderFit train_recommender(const Matrix& fused, std::span<const int> labels, const Vocabulary& crop_vocab,
                                 const RecommenderConfig& config, const Matrix* val_fused,
                                 std::span<const int> val_labels) {
  if (labels.empty() || fused.rows == 0) raise(ErrorCode::kEmptyDataset, "recommender training set is empty");
  if (fused.rows != labels.size()) raise(ErrorCode::kContract, "fused rows and labels differ in count");
  if (crop_vocab.size() == 0) raise(ErrorCode::kContract, "empty crop vocabulary");
  if (val_fused && (val_fused->rows != val_labels.size() || val_fused->cols != fused.cols)) {
    raise(ErrorCode::kContract, "validation rows inconsistent with training rows");
  }
  RecommenderFit result;
  if (std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; })) {
    result.warnings.push_back("training labels contain a single class");
  }

  if (config.kfold > 0) {
    const auto folds = stratified_kfold(labels, config.kfold, derive_seed(config.seed, {0x6376ULL}));
    CvReport cv;
    cv.warnings = folds.warnings;
    for (const auto& fold : folds.folds) {
      const Matrix tx = select_rows(fused, fold.train);
      const Matrix vx = select_rows(fused, fold.val);
      std::vector<int> ty, vy;
      for (auto i : fold.train) ty.push_back(labels[i]);
      for (auto i : fold.val) vy.push_back(labels[i]);
      FoldScore score;
      if (!vy.empty()) {
        const auto fitted = fit_backend(tx, ty, crop_vocab, config, nullptr, {});
        const Matrix probs = fitted.model.predict_proba(vx);
        std::vector<int> pred(vy.size());
        for (std::size_t i = 0; i < vy.size(); ++i) pred[i] = static_cast<int>(argmax(probs.row(i)));
        const auto prf = confusion_and_prf(vy, pred, crop_vocab.size());
        score = {prf.accuracy, prf.f1_macro};
      }
      cv.folds.push_back(score);
    }
    for (const auto& f : cv.folds) {
      cv.mean_accuracy += f.accuracy;
      cv.mean_f1_macro += f.f1_macro;
    }
    cv.mean_accuracy /= static_cast<double>(cv.folds.size());
    cv.mean_f1_macro /= static_cast<double>(cv.folds.size());
    result.cv = std::move(cv);
  }

  auto fitted = fit_backend(fused, labels, crop_vocab, config, val_fused, val_labels);
  result.model = std::move(fitted.model);
  result.history = std::move(fitted.history);
  return result;
}

Recommendation recommend(const RecommenderModel& model, std::span<const double> fused) {
  Recommendation r;
  r.distribution = model.predict_proba(fused);
  r.crop = static_cast<int>(argmax(r.distribution));
  r.crop_name = model.crop_vocab.name(r.crop);
  return r;
}

std::string recommendation_to_json(const Recommendation& r) {
  nlohmann::ordered_json j;
  j["crop"] = r.crop_name;
  j["crop_index"] = r.crop;
  j["distribution"] = r.distribution;
  j["soil_class"] = r.soil_name;
  j["soil_index"] = r.soil_class;
  j["soil_confidence"] = r.soil_confidence;
  j["low_confidence"] = r.low_confidence;
  return j.dump();
}

}  // namespace agro
