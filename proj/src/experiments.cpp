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
#include "agrosense/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "agrosense/error.hpp"
#include "agrosense/rng.hpp"

namespace agro {

namespace {

struct MetricField {
  const char* key;
  const char* title;
  double MetricsReport::*member;
};

constexpr MetricField kFields[] = {
    {"accuracy", "Accuracy", &MetricsReport::accuracy},
    {"precision_macro", "Precision", &MetricsReport::precision_macro},
    {"recall_macro", "Recall", &MetricsReport::recall_macro},
    {"f1_macro", "F1", &MetricsReport::f1_macro},
    {"roc_auc_macro", "ROC-AUC", &MetricsReport::roc_auc_macro},
    {"rmse", "RMSE", &MetricsReport::rmse},
    {"mae", "MAE", &MetricsReport::mae},
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string model_name(const RecommenderConfig& rc) {
  if (rc.backend == Backend::kMlp) return "MLP " + std::to_string(rc.mlp.hidden) + "-relu-c";
  return "GBDT " + std::to_string(rc.gbdt.rounds) + "x depth " + std::to_string(rc.gbdt.max_depth);
}

Matrix stack(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  return m;
}

// Per-sample features of one split part, computed once through the trained
// pipeline so the unimodal arms see exactly what the fused arm sees.
struct PartFeatures {
  std::vector<std::vector<double>> tabular;
  std::vector<std::vector<double>> image;
  std::vector<int> labels;
};

PartFeatures part_features(const TrainedPipeline& p, const Dataset& dataset, std::span<const std::size_t> idx) {
  PartFeatures out;
  for (auto i : idx) {
    const auto& s = dataset.samples[i];
    out.tabular.push_back(tabular_features(p, s.profile));
    const auto soil = soil_features(p, s.image);
    out.image.push_back(p.fusion == FusionMode::kHard ? soil.one_hot : soil.probabilities);
    out.labels.push_back(*s.crop);
  }
  return out;
}

MetricsReport unimodal_arm(const std::vector<std::vector<double>> PartFeatures::*which, const PartFeatures& train,
                           const PartFeatures& val, const PartFeatures& test, const TrainedPipeline& p,
                           const RecommenderConfig& rc) {
  const Matrix tx = stack(train.*which);
  const Matrix vx = stack(val.*which);
  const auto fit = train_recommender(tx, train.labels, p.crop_vocab, rc, val.labels.empty() ? nullptr : &vx,
                                     val.labels);
  const Matrix probs = fit.model.predict_proba(stack(test.*which));
  return evaluate_predictions(test.labels, probs, p.crop_vocab.size());
}

template <typename F>
auto annotated(const std::string& arm, std::uint64_t seed, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    rethrow_in_stage(e, "arm " + arm + ", seed " + std::to_string(seed));
  }
}

}  // namespace

MetricsReport mean_metrics(std::span<const MetricsReport> rows) {
  MetricsReport m{};
  if (rows.empty()) return m;
  for (const auto& f : kFields) {
    double s = 0.0;
    for (const auto& r : rows) s += r.*f.member;
    m.*f.member = s / static_cast<double>(rows.size());
  }
  return m;
}

MetricsReport stddev_metrics(std::span<const MetricsReport> rows) {
  MetricsReport sd{};
  if (rows.size() < 2) return sd;
  const MetricsReport mean = mean_metrics(rows);
  for (const auto& f : kFields) {
    double ss = 0.0;
    for (const auto& r : rows) ss += (r.*f.member - mean.*f.member) * (r.*f.member - mean.*f.member);
    sd.*f.member = std::sqrt(ss / static_cast<double>(rows.size() - 1));
  }
  return sd;
}

AblationReport run_ablation(const Dataset& dataset, const AblationConfig& config) {
  if (config.seeds.size() < 2) raise(ErrorCode::kContract, "ablation needs at least 2 seeds");
  AblationReport report;
  report.seeds = config.seeds;
  const std::string model = model_name(config.pipeline.recommender);
  report.arms = {
      {"fused", model, "Fused (Image + tabular)", {}, {}, {}},
      {"tabular_only", model, "Tabular", {}, {}, {}},
      {"image_only", model, "Image", {}, {}, {}},
  };

  for (const auto seed : config.seeds) {
    PipelineConfig pc = config.pipeline;
    apply_seed(pc, seed);
    const auto split = pipeline_split(dataset, pc.split, seed);
    std::vector<std::string> ids;
    for (auto i : split.test) ids.push_back(dataset.samples[i].id);
    report.test_ids.push_back(std::move(ids));

    const auto fit = annotated("fused", seed, [&] { return train_pipeline(dataset, split, pc); });
    const auto& p = fit.pipeline;
    report.arms[0].per_seed.push_back(
        annotated("fused", seed, [&] { return evaluate_pipeline(p, dataset, split.test).metrics; }));

    const auto train = part_features(p, dataset, split.train);
    const auto val = part_features(p, dataset, split.val);
    const auto test = part_features(p, dataset, split.test);
    RecommenderConfig rc = pc.recommender;
    rc.kfold = 0;
    report.arms[1].per_seed.push_back(annotated(
        "tabular_only", seed, [&] { return unimodal_arm(&PartFeatures::tabular, train, val, test, p, rc); }));
    report.arms[2].per_seed.push_back(annotated(
        "image_only", seed, [&] { return unimodal_arm(&PartFeatures::image, train, val, test, p, rc); }));
  }
  for (auto& arm : report.arms) {
    arm.mean = mean_metrics(arm.per_seed);
    arm.stddev = stddev_metrics(arm.per_seed);
  }
  return report;
}

void significance(AblationReport& report) {
  if (report.seeds.size() < 2) raise(ErrorCode::kContract, "significance needs at least 2 seeds");
  auto column = [](const ArmResult& arm, double MetricsReport::*m) {
    std::vector<double> v;
    for (const auto& r : arm.per_seed) v.push_back(r.*m);
    return v;
  };
  report.ttests.clear();
  const auto fused = column(report.arms.at(0), &MetricsReport::accuracy);
  for (std::size_t a = 1; a < report.arms.size(); ++a) {
    report.ttests.push_back({report.arms[a].name, paired_ttest(fused, column(report.arms[a], &MetricsReport::accuracy))});
  }
  std::vector<std::vector<double>> groups;
  for (const auto& arm : report.arms) groups.push_back(column(arm, &MetricsReport::rmse));
  report.anova.reset();
  report.anova_note.clear();
  try {
    report.anova = anova_oneway(groups);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateVariance) throw;
    report.anova_note = e.what();
  }
}

std::string emit_report(const AblationReport& report, std::string_view format) {
  std::ostringstream os;
  if (format == "csv") {
    os << "arm,seed";
    for (const auto& f : kFields) os << ',' << f.key;
    os << '\n';
    auto row = [&](const std::string& arm, const std::string& seed, const MetricsReport& m) {
      os << arm << ',' << seed;
      for (const auto& f : kFields) os << ',' << fmt("%.17g", m.*f.member);
      os << '\n';
    };
    for (const auto& arm : report.arms) {
      for (std::size_t s = 0; s < arm.per_seed.size(); ++s) row(arm.name, std::to_string(report.seeds[s]), arm.per_seed[s]);
      row(arm.name, "mean", arm.mean);
      row(arm.name, "sd", arm.stddev);
    }
    return os.str();
  }
  if (format != "markdown") raise(ErrorCode::kContract, "unknown report format '" + std::string(format) + "'");

  os << "# Modality ablation\n\n";
  os << "Seeds:";
  for (std::size_t i = 0; i < report.seeds.size(); ++i) os << (i ? ", " : " ") << report.seeds[i];
  os << ". Every arm is scored on the same " << (report.test_ids.empty() ? 0 : report.test_ids[0].size())
     << "-sample stratified test split per seed.\n\n";
  os << "| Model | Modality |";
  for (const auto& f : kFields) os << ' ' << f.title << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < std::size(kFields); ++i) os << "---|";
  os << '\n';
  for (std::size_t a = 0; a < report.arms.size(); ++a) {
    const auto& arm = report.arms[a];
    os << "| " << arm.model << " (" << arm.name << ") | " << arm.modality << " | "
       << fmt("%.1f%%", 100.0 * arm.mean.accuracy);
    if (a > 0 && a <= report.ttests.size()) os << "[^t" << a << ']';
    os << " |";
    for (std::size_t f = 1; f < std::size(kFields); ++f) {
      os << ' ' << fmt("%.4f", arm.mean.*kFields[f].member) << " ± " << fmt("%.4f", arm.stddev.*kFields[f].member);
      if (std::string_view(kFields[f].key) == "rmse" && (report.anova || !report.anova_note.empty())) os << "[^f]";
      os << " |";
    }
    os << '\n';
  }
  os << "\nAccuracy is the mean over seeds; other cells are mean ± sample standard deviation. "
        "RMSE and MAE are computed over crop class indices.\n\n";
  const double fused_acc = report.arms.empty() ? 0.0 : report.arms[0].mean.accuracy;
  for (std::size_t a = 1; a < report.arms.size(); ++a) {
    os << "Accuracy drop, " << report.arms[a].name << " versus fused: "
       << fmt("%.1f", 100.0 * (fused_acc - report.arms[a].mean.accuracy)) << " points.\n";
  }
  os << '\n';
  for (std::size_t i = 0; i < report.ttests.size(); ++i) {
    const auto& t = report.ttests[i].result;
    os << "[^t" << i + 1 << "]: Paired t-test on per-seed accuracy, fused versus " << report.ttests[i].baseline
       << ": t = " << fmt("%.4g", t.t) << ", p = " << fmt("%.4g", t.p) << ", df = " << fmt("%g", t.df) << ".\n";
  }
  if (report.anova) {
    os << "[^f]: One-way ANOVA on per-seed RMSE across the " << report.arms.size() << " arms: F = "
       << fmt("%.4g", report.anova->f) << ", p = " << fmt("%.4g", report.anova->p) << ", df = ("
       << fmt("%g", report.anova->df_between) << ", " << fmt("%g", report.anova->df_within) << ").\n";
  } else if (!report.anova_note.empty()) {
    os << "[^f]: One-way ANOVA on per-seed RMSE not computed: " << report.anova_note << ".\n";
  }
  return os.str();
}

}  // namespace agro
