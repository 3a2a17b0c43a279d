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
#include <cmath>
#include <numeric>

#include "agrosense/datagen.hpp"
#include "agrosense/soil.hpp"
#include "agrosense/trainer.hpp"
#include "support.hpp"

using namespace agro;
using agro::test::error_code_of;
using doctest::Approx;

namespace {

SoilTrainConfig quick_config(std::size_t epochs, std::size_t size = 16) {
  SoilTrainConfig cfg;
  cfg.train.epochs = epochs;
  cfg.train.seed = 5;
  cfg.train.optimizer.lr = 3e-3;
  cfg.image = {size, size};
  return cfg;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

struct Fixture {
  Dataset ds;
  SplitAssignment split;
  SoilCnnResult fit;
};

const Fixture& trained_fixture() {
  static const Fixture f = [] {
    SynthSpec spec;
    spec.samples_per_class = 50;
    spec.image_size = 16;
    spec.seed = 3;
    Fixture out;
    out.ds = generate_dataset(spec);
    out.split = stratified_split(out.ds.soil_labels(), SplitRatios{}, 4);
    SoilCnnConfig cnn;
    out.fit = train_soil_cnn(out.ds, out.split, cnn, quick_config(10));
    return out;
  }();
  return f;
}

}  // namespace

TEST_CASE("soil cnn layout") {
  SoilCnnConfig cfg;
  const auto net = build_soil_cnn(cfg, {32, 32}, 1);
  CHECK(net.output_size() == 7);
  // 32 -> conv 30 -> pool 15 -> conv 13 -> pool 6, 16 channels.
  CHECK(net.parameters()[4].shape == Shape{64, 16 * 6 * 6});
  cfg.blocks = {{8, true}};
  const auto res = build_soil_cnn(cfg, {16, 16}, 1);
  CHECK(res.logits(Tensor({3, 16, 16}, 0.5)).size() == 7);
}

TEST_CASE("fit_classifier keeps the best epoch and is deterministic") {
  const auto& f = trained_fixture();
  const auto& h = f.fit.history;
  REQUIRE(h.epochs.size() == 10);
  std::size_t best = 0;
  for (std::size_t e = 1; e < h.epochs.size(); ++e) {
    if (h.epochs[e].val_loss < h.epochs[best].val_loss) best = e;
  }
  CHECK(h.best_epoch == best);
  CHECK_FALSE(h.monitored_train_loss);

  // Returned parameters reproduce the best epoch's validation loss.
  std::vector<Tensor> val_x;
  std::vector<int> val_y;
  for (auto i : f.split.val) {
    val_x.push_back(preprocess_image(f.ds.samples[i].image, {16, 16}));
    val_y.push_back(*f.ds.samples[i].soil_class);
  }
  CHECK(evaluate_classifier(f.fit.network, val_x, val_y).loss == Approx(h.epochs[best].val_loss).epsilon(1e-12));

  const auto again = train_soil_cnn(f.ds, f.split, SoilCnnConfig{}, quick_config(10));
  CHECK(again.history == h);
  CHECK(again.network.parameters() == f.fit.network.parameters());
}

TEST_CASE("textures are learned quickly") {
  const auto& f = trained_fixture();
  CHECK(f.fit.history.epochs.back().val_accuracy >= 0.9);
}

TEST_CASE("classify_soil output contract") {
  const auto& f = trained_fixture();
  for (auto i : f.split.test) {
    const auto t = preprocess_image(f.ds.samples[i].image, {16, 16});
    const auto p = classify_soil(f.fit.network, t);
    CHECK(std::abs(sum(p.probabilities) - 1.0) < 1e-12);
    CHECK(p.one_hot[static_cast<std::size_t>(p.soil_class)] == 1.0);
    CHECK(sum(p.one_hot) == 1.0);
    CHECK(p.confidence == *std::max_element(p.probabilities.begin(), p.probabilities.end()));
    CHECK(p.confidence > 1.0 / 7.0);
    CHECK_FALSE(p.low_confidence);
  }
  CHECK(error_code_of([&] { classify_soil(f.fit.network, Tensor({3, 8, 8})); }) == ErrorCode::kShape);
}

TEST_CASE("Black fixture texture is recognized confidently") {
  const auto& f = trained_fixture();
  const int black = f.ds.soil_vocab.index_of("Black");
  int seen = 0;
  for (auto i : f.split.test) {
    if (*f.ds.samples[i].soil_class != black) continue;
    const auto p = classify_soil(f.fit.network, preprocess_image(f.ds.samples[i].image, {16, 16}));
    CHECK(p.soil_class == black);
    CHECK(p.confidence > 0.9);
    ++seen;
  }
  CHECK(seen > 0);
}

TEST_CASE("feedback loop") {
  const auto& f = trained_fixture();
  const auto t = preprocess_image(f.ds.samples[f.split.test[0]].image, {16, 16});
  const auto plain = classify_soil(f.fit.network, t);

  FeedbackConfig confident;
  confident.threshold = 0.0;
  const auto same = classify_with_feedback(f.fit.network, t, confident);
  CHECK(same.probabilities == plain.probabilities);
  CHECK_FALSE(same.low_confidence);

  FeedbackConfig forced;
  forced.threshold = 1.01;
  forced.seed = 9;
  const auto tta = classify_with_feedback(f.fit.network, t, forced);
  CHECK(tta.low_confidence);
  CHECK(std::abs(sum(tta.probabilities) - 1.0) < 1e-9);
  CHECK(tta.soil_class == static_cast<int>(std::max_element(tta.probabilities.begin(), tta.probabilities.end()) -
                                           tta.probabilities.begin()));
  const auto tta2 = classify_with_feedback(f.fit.network, t, forced);
  CHECK(tta2.probabilities == tta.probabilities);

  forced.n_tta = 0;
  CHECK(error_code_of([&] { classify_with_feedback(f.fit.network, t, forced); }) == ErrorCode::kContract);
}

TEST_CASE("one-class training converges") {
  SynthSpec spec;
  spec.soil_classes = {"Alluvial"};
  spec.crops = {"a", "b"};
  spec.samples_per_class = 20;
  spec.image_size = 8;
  const auto ds = generate_dataset(spec);
  SplitAssignment split = stratified_split(ds.soil_labels(), SplitRatios{}, 1);
  SoilCnnConfig cnn;
  cnn.class_count = 1;
  cnn.blocks = {{4, false}};
  auto cfg = quick_config(3, 8);
  const auto fit = train_soil_cnn(ds, split, cnn, cfg);
  CHECK(fit.history.epochs.back().train_loss < 0.01);
}

TEST_CASE("empty training split is rejected") {
  SynthSpec spec;
  spec.samples_per_class = 2;
  spec.image_size = 8;
  const auto ds = generate_dataset(spec);
  SplitAssignment split;
  split.val = {0};
  CHECK(error_code_of([&] { train_soil_cnn(ds, split, SoilCnnConfig{}, quick_config(1, 8)); }) ==
        ErrorCode::kEmptyDataset);
}

TEST_CASE("diverging training reports the epoch") {
  std::vector<Tensor> x = {Tensor({2}, {1e200, -1e200}), Tensor({2}, {-1e200, 1e200})};
  std::vector<int> y = {0, 1};
  Network net({2}, {LayerSpec::dense(4), LayerSpec::relu(), LayerSpec::dense(2)}, 1);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.optimizer.kind = OptimizerKind::kSgdMomentum;
  cfg.optimizer.lr = 1.0;
  const auto msg = agro::test::error_message_of([&] { fit_classifier(net, x, y, {}, {}, cfg); });
  CHECK(msg.find("epoch") != std::string::npos);
}

TEST_CASE("no validation set monitors train loss") {
  std::vector<Tensor> x = {Tensor({2}, {1, 0}), Tensor({2}, {0, 1})};
  std::vector<int> y = {0, 1};
  Network net({2}, {LayerSpec::dense(2)}, 1);
  TrainConfig cfg;
  cfg.epochs = 3;
  const auto h = fit_classifier(net, x, y, {}, {}, cfg);
  CHECK(h.monitored_train_loss);
  CHECK(h.epochs.size() == 3);
}
