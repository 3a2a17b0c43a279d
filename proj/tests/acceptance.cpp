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
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Thresholds are checked as stated; nothing is retried or relaxed.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "agrosense/artifact.hpp"
#include "agrosense/datagen.hpp"
#include "agrosense/error.hpp"
#include "agrosense/experiments.hpp"
#include "agrosense/gbdt.hpp"
#include "agrosense/image.hpp"
#include "agrosense/metrics.hpp"
#include "agrosense/nn.hpp"
#include "agrosense/rng.hpp"
#include "agrosense/soil.hpp"
#include "agrosense/stats.hpp"
#include "agrosense/trainer.hpp"

#ifndef AGRO_CLI_PATH
#error "AGRO_CLI_PATH must point at the agrosense executable"
#endif

namespace fs = std::filesystem;
using namespace agro;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the individual checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + ("failed: " + f);
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Tensor random_tensor(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (auto& v : t.data) v = rng.uniform() * 2.0 - 1.0;
  return t;
}

// 1. Gradient integrity.
void gradients(Checks& c) {
  const auto t0 = Clock::now();
  Rng seeds(0x67726164ULL);
  double worst_mlp = 0, worst_cnn = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const std::uint64_t s1 = seeds.next_u64(), s2 = seeds.next_u64();
    Rng rng(seeds.next_u64());
    Network mlp({7}, {LayerSpec::dense(16), LayerSpec::relu(), LayerSpec::dense(5)}, s1);
    worst_mlp = std::max(worst_mlp, gradient_check(mlp, random_tensor({7}, rng), static_cast<int>(rng.below(5))));
    Network cnn({3, 8, 8},
                {LayerSpec::conv2d(4, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2), LayerSpec::flatten(),
                 LayerSpec::dense(6), LayerSpec::relu(), LayerSpec::dense(4)},
                s2);
    worst_cnn = std::max(worst_cnn, gradient_check(cnn, random_tensor({3, 8, 8}, rng), static_cast<int>(rng.below(4))));
  }
  const double secs = seconds_since(t0);
  c.expect(worst_mlp < 1e-4, "dense MLP max relative error " + sci(worst_mlp));
  c.expect(worst_cnn < 1e-4, "conv/pool/dense max relative error " + sci(worst_cnn));
  c.expect(secs < 30.0, "runtime " + fmt(secs, 1) + " s");
  c.note("max rel err MLP " + sci(worst_mlp) + ", CNN " + sci(worst_cnn) + ", " + fmt(secs, 2) +
         " s over 5 random inits each");
}

// 2. Metric and statistics oracles.
void metric_oracles(Checks& c) {
  const int truth[] = {0, 0, 1, 1}, pred[] = {0, 1, 1, 1};
  const auto prf = confusion_and_prf(truth, pred, 2);
  c.expect(near(prf.accuracy, 0.75, 1e-6), "accuracy " + fmt(prf.accuracy, 6));
  // Per class F1: 2/3 and 4/5.
  c.expect(near(prf.f1_macro, (2.0 / 3.0 + 0.8) / 2.0, 1e-6), "macro F1 " + fmt(prf.f1_macro, 6));

  const double zeros[] = {0, 0}, err[] = {3, 4};
  const auto e = rmse_mae(zeros, err);
  c.expect(near(e.rmse, 3.535534, 1e-6), "RMSE " + fmt(e.rmse, 7));
  c.expect(near(e.mae, 3.5, 1e-6), "MAE " + fmt(e.mae, 7));

  const int y[] = {0, 0, 1, 1};
  Matrix scores(4, 2);
  const double pos[] = {0.1, 0.4, 0.35, 0.8};
  for (std::size_t i = 0; i < 4; ++i) {
    scores(i, 0) = 1 - pos[i];
    scores(i, 1) = pos[i];
  }
  const double auc = roc_auc_macro_ovr(y, scores, 2).auc;
  c.expect(near(auc, 0.75, 1e-6), "AUC " + fmt(auc, 6));

  const double a[] = {2, 4, 6}, b[] = {1, 3, 8};
  const auto t = paired_ttest(a, b);
  c.expect(near(t.t, 0.0, 1e-6) && near(t.p, 1.0, 1e-6), "paired t " + fmt(t.t) + ", p " + fmt(t.p));

  const auto f = anova_oneway({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}});
  c.expect(near(f.f, 3.0, 1e-6) && f.df_between == 2.0 && f.df_within == 6.0,
           "ANOVA F " + fmt(f.f) + " df " + fmt(f.df_between, 0) + "," + fmt(f.df_within, 0));

  // High-precision references (scipy.stats).
  const double p1 = student_t_two_sided_p(2.776, 4);
  c.expect(near(p1, 0.0500, 5e-4) && near(p1, 0.0500227783199764, 1e-9), "p(t=2.776, df=4) = " + fmt(p1, 10));
  const double p2 = f_survival(14.72, 2, 12);
  c.expect(near(p2, 0.0005896156411809931, 1e-9), "F survival " + fmt(p2, 10));
  c.note("acc " + fmt(prf.accuracy) + ", F1 " + fmt(prf.f1_macro) + ", RMSE " + fmt(e.rmse, 6) + ", MAE " +
         fmt(e.mae) + ", AUC " + fmt(auc) + ", F " + fmt(f.f) + ", p(2.776,4) " + fmt(p1, 6));
}

// 3. Fused beats each single modality on the default synthetic data.
void multimodal(Checks& c) {
  const auto t0 = Clock::now();
  const Dataset ds = generate_dataset(SynthSpec{});
  AblationConfig cfg;
  auto report = run_ablation(ds, cfg);
  significance(report);
  const double secs = seconds_since(t0);
  c.expect(ds.size() == 2100, "dataset size " + std::to_string(ds.size()));
  c.expect(report.seeds.size() == 5, "seed count");
  std::map<std::string, double> mean;
  for (const auto& arm : report.arms) mean[arm.name] = arm.mean.accuracy;
  const double fused = mean["fused"];
  c.expect(fused >= 0.90, "fused mean accuracy " + fmt(fused));
  for (const char* arm : {"tabular_only", "image_only"}) {
    c.expect(fused - mean[arm] >= 0.05, std::string("margin over ") + arm + " " + fmt(fused - mean[arm]));
  }
  for (const auto& t : report.ttests) {
    c.expect(t.result.p < 0.05, "paired t-test vs " + t.baseline + " p " + fmt(t.result.p, 6));
  }
  c.expect(report.ttests.size() == 2, "two t-tests");
  c.expect(secs < 600.0, "runtime " + fmt(secs, 1) + " s");
  std::string ps;
  for (const auto& t : report.ttests) ps += ", p vs " + t.baseline + " " + fmt(t.result.p, 6);
  c.note("fused " + fmt(fused) + ", tabular_only " + fmt(mean["tabular_only"]) + ", image_only " +
         fmt(mean["image_only"]) + ps + ", " + fmt(secs, 1) + " s");
}

// 4. Soil CNN accuracy and the plateau scheduler.
void soil_cnn(Checks& c) {
  const Dataset ds = generate_dataset(SynthSpec{});
  const auto split = stratified_split(ds, SplitRatios{}, derive_seed(42, {0x736f696cULL}), StratifyBy::kSoil);
  SoilTrainConfig cfg;
  cfg.train.seed = derive_seed(42, {1});
  cfg.policy.seed = derive_seed(42, {2});

  const auto t0 = Clock::now();
  const auto fit = train_soil_cnn(ds, split, SoilCnnConfig{}, cfg);
  std::vector<Tensor> x;
  std::vector<int> y;
  for (auto i : split.test) {
    x.push_back(preprocess_image(ds.samples[i].image, cfg.image));
    y.push_back(*ds.samples[i].soil_class);
  }
  const double acc = evaluate_classifier(fit.network, x, y).accuracy;
  const double secs = seconds_since(t0);
  c.expect(fit.history.epochs.size() <= 15, "epochs " + std::to_string(fit.history.epochs.size()));
  c.expect(acc >= 0.95, "test accuracy " + fmt(acc));
  c.expect(secs < 120.0, "runtime " + fmt(secs, 1) + " s");

  auto longer = cfg;
  longer.train.epochs = 40;
  longer.train.optimizer.lr = 1e-2;
  const auto t1 = Clock::now();
  const auto plateau = train_soil_cnn(ds, split, SoilCnnConfig{}, longer);
  const bool recorded = std::any_of(plateau.history.epochs.begin(), plateau.history.epochs.end(),
                                    [](const EpochRecord& r) { return r.lr_reduced; });
  c.expect(plateau.history.lr_reductions >= 1 && recorded, "plateau reductions " +
                                                               std::to_string(plateau.history.lr_reductions));
  c.note("test accuracy " + fmt(acc) + " in " + std::to_string(fit.history.epochs.size()) + " epochs, " +
         fmt(secs, 1) + " s; 40-epoch lr 1e-2 run: " + std::to_string(plateau.history.lr_reductions) +
         " lr reductions (" + fmt(seconds_since(t1), 1) + " s)");
}

// Brute-force split search: every midpoint, every sample.
std::optional<SplitCandidate> exhaustive_split(const std::vector<double>& x, const std::vector<double>& g,
                                               const std::vector<double>& h, const GbdtParams& p) {
  std::set<double> distinct(x.begin(), x.end());
  std::vector<double> sorted(distinct.begin(), distinct.end());
  double gt = 0, ht = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    gt += g[i];
    ht += h[i];
  }
  std::optional<SplitCandidate> best;
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    const double thr = 0.5 * (sorted[k] + sorted[k + 1]);
    double gl = 0, hl = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < thr) {
        gl += g[i];
        hl += h[i];
      }
    }
    const double gr = gt - gl, hr = ht - hl;
    if (hl < p.min_child_hessian || hr < p.min_child_hessian) continue;
    const double gain =
        0.5 * (gl * gl / (hl + p.lambda) + gr * gr / (hr + p.lambda) - gt * gt / (ht + p.lambda)) - p.gamma;
    if (gain <= 0.0) continue;
    if (!best || gain > best->gain) best = SplitCandidate{thr, gain};
  }
  return best;
}

// 5. GBDT split search against brute force, plus XOR.
void gbdt(Checks& c) {
  Rng rng(0x67626474ULL);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<double> x(n), g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(rng.uniform() * 40.0) / 4.0;
      g[i] = rng.uniform() * 2.0 - 1.0;
      h[i] = 0.05 + rng.uniform() * 0.2;
    }
    GbdtParams p;
    p.lambda = rng.uniform() * 2.0;
    p.gamma = rng.uniform() * 0.1;
    p.min_child_hessian = rng.uniform();
    const auto got = best_split(x, g, h, p);
    const auto want = exhaustive_split(x, g, h, p);
    if (got.has_value() != want.has_value() ||
        (got && (std::abs(got->gain - want->gain) > 1e-9 || got->threshold != want->threshold))) {
      ++mismatches;
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " of 200 split searches disagree with the oracle");

  Matrix x(300, 4);
  std::vector<int> y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    for (std::size_t j = 0; j < 4; ++j) x(i, j) = rng.uniform();
    y[i] = static_cast<int>((x(i, 0) + x(i, 1) + 0.4 * rng.uniform()) * 2.0) % 4;
  }
  const auto fit = fit_gbdt(x, y, GbdtParams{}, 4);
  bool monotone = fit.loss_trace.size() >= 2;
  for (std::size_t r = 1; r < fit.loss_trace.size(); ++r) monotone &= fit.loss_trace[r] <= fit.loss_trace[r - 1];
  c.expect(monotone, "training cross-entropy increased");

  const double centers[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  const int sizes[4] = {20, 7, 13, 9};
  std::vector<int> xy;
  Matrix xm(49, 2);
  std::size_t row = 0;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < sizes[k]; ++i, ++row) {
      xm(row, 0) = centers[k][0] + 0.1 * (rng.uniform() - 0.5);
      xm(row, 1) = centers[k][1] + 0.1 * (rng.uniform() - 0.5);
      xy.push_back(k < 2 ? 0 : 1);
    }
  }
  GbdtParams xp;
  xp.max_depth = 2;
  xp.rounds = 50;
  xp.min_child_hessian = 0.0;
  const auto xor_fit = fit_gbdt(xm, xy, xp, 2);
  const auto prob = predict_gbdt(xor_fit.model, xm);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < xy.size(); ++i) correct += argmax(prob.row(i)) == static_cast<std::size_t>(xy[i]);
  c.expect(correct == xy.size(), "XOR train accuracy " + fmt(static_cast<double>(correct) / xy.size()));
  c.note("200/200 splits match, loss " + fmt(fit.loss_trace.front()) + " -> " + fmt(fit.loss_trace.back()) +
         " over " + std::to_string(fit.loss_trace.size()) + " rounds, XOR accuracy " +
         fmt(static_cast<double>(correct) / xy.size(), 3));
}

// 6. Split proportions and seeded reproducibility.
void data_discipline(Checks& c) {
  Rng rng(0x73706c74ULL);
  int worst_excess = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> labels;
    const std::size_t classes = 2 + rng.below(7);
    for (std::size_t k = 0; k < classes; ++k) labels.insert(labels.end(), 1 + rng.below(120), static_cast<int>(k));
    rng.shuffle(std::span<int>(labels));
    const auto s = stratified_split(labels, SplitRatios{}, rng.next_u64());
    std::map<int, std::array<int, 4>> counts;  // train, val, test, total
    for (auto i : s.train) ++counts[labels[i]][0];
    for (auto i : s.val) ++counts[labels[i]][1];
    for (auto i : s.test) ++counts[labels[i]][2];
    for (int l : labels) ++counts[l][3];
    for (const auto& [label, n] : counts) {
      const double exact[3] = {0.8 * n[3], 0.1 * n[3], 0.1 * n[3]};
      for (int part = 0; part < 3; ++part) {
        const double off = std::abs(n[part] - exact[part]);
        if (off > 1.0 + 1e-9) worst_excess = std::max(worst_excess, static_cast<int>(std::ceil(off)));
      }
    }
    c.expect(s.train.size() + s.val.size() + s.test.size() == labels.size(), "split lost samples");
  }
  c.expect(worst_excess == 0, "a split part is " + std::to_string(worst_excess) + " samples off its exact share");

  const Dataset ds = generate_dataset(SynthSpec{});
  const auto labels = ds.crop_labels();
  const auto folds = stratified_kfold(labels, 5, 17);
  std::vector<int> seen(labels.size(), 0);
  for (const auto& f : folds.folds) {
    for (auto i : f.val) ++seen[i];
    c.expect(f.train.size() + f.val.size() == labels.size(), "fold train and validation do not cover data");
  }
  c.expect(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }), "folds do not partition the data");

  c.expect(stratified_split(ds, SplitRatios{}, 5) == stratified_split(ds, SplitRatios{}, 5), "split not reproducible");
  c.expect(stratified_kfold(labels, 5, 17).folds == folds.folds, "k-fold not reproducible");
  AugmentPolicy policy;
  policy.seed = 99;
  const Tensor img = preprocess_image(ds.samples[0].image, ImagePreprocessConfig{});
  Rng r1 = augment_stream(policy, 3, 4), r2 = augment_stream(policy, 3, 4);
  c.expect(augment(img, policy, r1) == augment(img, policy, r2), "augmentation not reproducible");

  SynthSpec small;
  small.samples_per_class = 20;
  small.image_size = 16;
  const Dataset sd = generate_dataset(small);
  PipelineConfig pc;
  pc.soil.image = {16, 16};
  pc.soil.train.epochs = 3;
  pc.recommender.mlp.train.epochs = 20;
  apply_seed(pc, 8);
  const auto sp = pipeline_split(sd, pc.split, 8);
  const auto a = serialize_pipeline(train_pipeline(sd, sp, pc).pipeline);
  const auto b = serialize_pipeline(train_pipeline(sd, sp, pc).pipeline);
  c.expect(a == b, "training not byte reproducible");
  c.note("50 random label sets within +-1, 5 folds partition 2100 samples, split/fold/augment/train artifacts "
         "byte-identical on rerun");
}

// 7. Persistence.
void persistence(Checks& c) {
  SynthSpec spec;
  spec.samples_per_class = 20;
  spec.image_size = 16;
  const Dataset ds = generate_dataset(spec);
  PipelineConfig pc;
  pc.soil.image = {16, 16};
  pc.soil.train.epochs = 3;
  pc.recommender.mlp.train.epochs = 20;
  apply_seed(pc, 6);
  const auto pipeline = train_pipeline(ds, pipeline_split(ds, pc.split, 6), pc).pipeline;

  const fs::path path = fs::temp_directory_path() / ("agro-accept-" + std::to_string(::getpid()) + ".agro");
  save_pipeline(pipeline, path);
  const auto loaded = load_pipeline(path);
  Rng rng(0x70657273ULL);
  int differing = 0;
  const double lo[7] = {0, 5, 5, 3.5, 8, 14, 20}, hi[7] = {140, 145, 205, 9.9, 43, 100, 300};
  for (int i = 0; i < 100; ++i) {
    SoilImage img;
    img.height = img.width = 8 + rng.below(40);
    img.channels = 3;
    img.data.resize(img.height * img.width * 3);
    for (auto& v : img.data) v = rng.uniform();
    std::vector<double> values(7);
    for (std::size_t j = 0; j < 7; ++j) values[j] = lo[j] + (hi[j] - lo[j]) * rng.uniform();
    NutrientProfile p(values);
    if (rng.bernoulli(0.2)) p.missing[rng.below(7)] = true;
    differing += !(predict_pipeline(pipeline, img, p) == predict_pipeline(loaded, img, p));
  }
  c.expect(differing == 0, std::to_string(differing) + " of 100 predictions differ after reload");

  auto bytes = read_bytes(path);
  fs::remove(path);
  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x04;
  std::string corrupt_msg;
  try {
    deserialize_pipeline(flipped);
    c.expect(false, "corrupted artifact accepted");
  } catch (const agro::Error& e) {
    corrupt_msg = e.what();
    c.expect(e.code() == ErrorCode::kCorruptArtifact, "corrupted artifact gave " + corrupt_msg);
  }
  auto bumped = bytes;
  bumped[4] = static_cast<std::uint8_t>(kArtifactVersion + 1);
  try {
    deserialize_pipeline(bumped);
    c.expect(false, "version-bumped artifact accepted");
  } catch (const agro::Error& e) {
    c.expect(e.code() == ErrorCode::kIncompatibleArtifact, "version bump gave " + std::string(e.what()));
  }
  c.note("100/100 predictions bit-identical; flipped byte -> \"" + corrupt_msg + "\"; version bump rejected");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = "'" + std::string(AGRO_CLI_PATH) + "' " + args + " >'" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. The CLI from synthesis to ablation on defaults.
void cli_end_to_end(Checks& c) {
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / ("agro-accept-cli-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  const auto data = dir / "data", model = dir / "model.agro", log = dir / "log.txt";

  auto step = [&](const std::string& name, const std::string& args) {
    const int code = run_cli(args, log);
    c.expect(code == 0, name + " exited " + std::to_string(code) + ": " + slurp(log).substr(0, 300));
    return code == 0;
  };
  if (!step("synth", "synth --out " + q(data))) return;
  if (!step("train", "train --data " + q(data) + " --out " + q(model))) return;
  if (!step("evaluate", "evaluate --artifact " + q(model) + " --data " + q(data) + " --out " + q(dir / "m.json")))
    return;

  std::ifstream csv(data / "data.csv");
  std::string header, line;
  std::getline(csv, header);
  std::getline(csv, line);
  const auto id = line.substr(0, line.find(','));
  std::string row;
  std::stringstream ss(line);
  std::string cell;
  std::getline(ss, cell, ',');
  for (int i = 0; i < 7 && std::getline(ss, cell, ','); ++i) row += (i ? "," : "") + cell;
  if (!step("predict", "predict --artifact " + q(model) + " --image " + q(data / "images" / (id + ".ppm")) +
                           " --nutrients '" + row + "'"))
    return;
  const std::string prediction = slurp(log);
  c.expect(prediction.find("\"crop\"") != std::string::npos, "predict printed no crop");

  if (!step("ablate", "ablate --data " + q(data) + " --out " + q(dir / "report.md"))) return;
  const std::string md = slurp(dir / "report.md");
  std::istringstream in(md);
  std::set<std::string> arms;
  for (std::string l; std::getline(in, l);) {
    if (l.rfind("| MLP", 0) == 0) arms.insert(l);
  }
  c.expect(md.find("| Model | Modality | Accuracy | Precision | Recall | F1 | ROC-AUC | RMSE | MAE |") !=
               std::string::npos,
           "report lacks the results table header");
  c.expect(arms.size() == 3, "report has " + std::to_string(arms.size()) + " arm rows");
  c.expect(md.find("[^t1]:") != std::string::npos && md.find("[^t2]:") != std::string::npos,
           "report lacks significance footnotes");
  fs::remove_all(dir);
  c.note("synth, train, evaluate, predict, ablate all exit 0; report has 3 arm rows and t-test footnotes; " +
         fmt(seconds_since(t0), 1) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Checks&)>>> criteria = {
      {"gradient integrity", gradients},
      {"metric oracles", metric_oracles},
      {"multimodal superiority", multimodal},
      {"soil CNN", soil_cnn},
      {"GBDT correctness", gbdt},
      {"data discipline", data_discipline},
      {"persistence", persistence},
      {"end-to-end CLI", cli_end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checks c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failed += !c.ok();
    std::printf("%s criterion %zu (%s): %s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                c.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
