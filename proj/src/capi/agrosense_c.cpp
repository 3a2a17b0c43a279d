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
#include "agrosense/agrosense.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "agrosense/artifact.hpp"
#include "agrosense/config.hpp"
#include "agrosense/datagen.hpp"
#include "agrosense/error.hpp"
#include "agrosense/experiments.hpp"
#include "agrosense/image.hpp"
#include "agrosense/pipeline.hpp"
#include "agrosense/rng.hpp"
#include "json.hpp"

struct agro_pipeline {
  agro::TrainedPipeline impl;
};

namespace {

thread_local std::string g_last_error;

agro_status to_status(agro::ErrorCode code) {
  using agro::ErrorCode;
  switch (code) {
    case ErrorCode::kSchema: return AGRO_ERR_SCHEMA;
    case ErrorCode::kEmptyDataset: return AGRO_ERR_EMPTY_DATASET;
    case ErrorCode::kBounds: return AGRO_ERR_BOUNDS;
    case ErrorCode::kContract: return AGRO_ERR_CONTRACT;
    case ErrorCode::kNumerical: return AGRO_ERR_NUMERICAL;
    case ErrorCode::kShape: return AGRO_ERR_SHAPE;
    case ErrorCode::kFormat: return AGRO_ERR_FORMAT;
    case ErrorCode::kCorruptFile: return AGRO_ERR_CORRUPT_FILE;
    case ErrorCode::kUnimputableFeature: return AGRO_ERR_UNIMPUTABLE_FEATURE;
    case ErrorCode::kDegenerateData: return AGRO_ERR_DEGENERATE_DATA;
    case ErrorCode::kDegenerateVariance: return AGRO_ERR_DEGENERATE_VARIANCE;
    case ErrorCode::kUndefinedAuc: return AGRO_ERR_UNDEFINED_AUC;
    case ErrorCode::kIncompatibleArtifact: return AGRO_ERR_INCOMPATIBLE_ARTIFACT;
    case ErrorCode::kCorruptArtifact: return AGRO_ERR_CORRUPT_ARTIFACT;
    case ErrorCode::kFilesystem: return AGRO_ERR_FILESYSTEM;
    case ErrorCode::kUsage: return AGRO_ERR_USAGE;
    case ErrorCode::kConfig: return AGRO_ERR_CONFIG;
  }
  return AGRO_ERR_INTERNAL;
}

template <typename F>
agro_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return AGRO_OK;
  } catch (const agro::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
  } catch (...) {
    g_last_error = "internal error";
  }
  return AGRO_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw agro::Error(agro::ErrorCode::kContract, std::string("invalid argument: ") + what);
}

// Contract errors raised by require() are argument errors at this boundary.
agro_status checked(agro_status s) {
  if (s == AGRO_ERR_CONTRACT && g_last_error.rfind("invalid argument: ", 0) == 0) return AGRO_ERR_INVALID_ARGUMENT;
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

agro::RunConfig run_config(const char* config_json, const uint64_t* seed) {
  agro::RunConfig rc = config_json ? agro::parse_run_config(config_json) : agro::RunConfig{};
  agro::apply_seed(rc.pipeline, agro::resolve_seed(seed, rc.pipeline.seed));
  return rc;
}

nlohmann::ordered_json history_json(const agro::TrainHistory& h) {
  nlohmann::ordered_json j;
  j["best_epoch"] = h.best_epoch;
  j["lr_reductions"] = h.lr_reductions;
  j["monitored_train_loss"] = h.monitored_train_loss;
  auto& epochs = j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& e : h.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", e.val_loss},
                      {"val_accuracy", e.val_accuracy},
                      {"lr", e.lr},
                      {"lr_reduced", e.lr_reduced}});
  }
  return j;
}

agro::NutrientProfile make_profile(const double* values, const unsigned char* missing, std::size_t count) {
  require(values != nullptr || count == 0, "values is NULL");
  agro::NutrientProfile p(std::vector<double>(values, values + count));
  for (std::size_t i = 0; missing && i < count; ++i) p.missing[i] = missing[i] != 0;
  return p;
}

void predict_into(const agro_pipeline* pipeline, const agro::SoilImage& image, const double* values,
                  const unsigned char* missing, std::size_t count, char** out) {
  const auto rec = agro::predict_pipeline(pipeline->impl, image, make_profile(values, missing, count));
  *out = dup_string(agro::recommendation_to_json(rec));
}

}  // namespace

extern "C" {

const char* agro_version(void) { return "1.0.0"; }

const char* agro_status_name(agro_status status) {
  switch (status) {
    case AGRO_OK: return "ok";
    case AGRO_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case AGRO_ERR_USAGE: return "usage";
    case AGRO_ERR_CONFIG: return "config";
    case AGRO_ERR_SCHEMA: return "schema";
    case AGRO_ERR_EMPTY_DATASET: return "empty_dataset";
    case AGRO_ERR_BOUNDS: return "bounds";
    case AGRO_ERR_CONTRACT: return "contract";
    case AGRO_ERR_NUMERICAL: return "numerical";
    case AGRO_ERR_SHAPE: return "shape";
    case AGRO_ERR_FORMAT: return "format";
    case AGRO_ERR_CORRUPT_FILE: return "corrupt_file";
    case AGRO_ERR_UNIMPUTABLE_FEATURE: return "unimputable_feature";
    case AGRO_ERR_DEGENERATE_DATA: return "degenerate_data";
    case AGRO_ERR_DEGENERATE_VARIANCE: return "degenerate_variance";
    case AGRO_ERR_UNDEFINED_AUC: return "undefined_auc";
    case AGRO_ERR_INCOMPATIBLE_ARTIFACT: return "incompatible_artifact";
    case AGRO_ERR_CORRUPT_ARTIFACT: return "corrupt_artifact";
    case AGRO_ERR_FILESYSTEM: return "filesystem";
    case AGRO_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* agro_last_error(void) { return g_last_error.c_str(); }

void agro_string_free(char* s) { std::free(s); }

void agro_bytes_free(uint8_t* bytes) { std::free(bytes); }

agro_status agro_synth(const char* spec_json, const char* out_dir, const uint64_t* seed) {
  return checked(guarded([&] {
    require(out_dir != nullptr, "out_dir is NULL");
    agro::SynthSpec spec = spec_json ? agro::synth_spec_from_json(spec_json) : agro::SynthSpec{};
    spec.seed = agro::resolve_seed(seed, spec.seed);
    agro::export_dataset(agro::generate_dataset(spec), out_dir, &spec);
  }));
}

agro_status agro_train(const char* data_dir, const char* config_json, const uint64_t* seed, agro_pipeline** out,
                       char** report_json) {
  return checked(guarded([&] {
    require(data_dir != nullptr, "data_dir is NULL");
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    if (report_json) *report_json = nullptr;
    const auto rc = run_config(config_json, seed);
    const auto dataset = agro::load_dataset_dir(data_dir);
    const auto split = agro::pipeline_split(dataset, rc.pipeline.split, rc.pipeline.seed);
    auto fit = agro::train_pipeline(dataset, split, rc.pipeline);
    if (report_json) {
      nlohmann::ordered_json j;
      j["seed"] = rc.pipeline.seed;
      j["split"] = nlohmann::ordered_json::parse(agro::split_to_json(split, dataset));
      j["soil_cnn"] = history_json(fit.report.soil_history);
      if (fit.report.recommender_history) j["recommender"] = history_json(*fit.report.recommender_history);
      if (fit.report.cv) {
        auto& cv = j["cross_validation"];
        cv["mean_accuracy"] = fit.report.cv->mean_accuracy;
        cv["mean_f1_macro"] = fit.report.cv->mean_f1_macro;
        cv["folds"] = nlohmann::ordered_json::array();
        for (const auto& f : fit.report.cv->folds) cv["folds"].push_back({{"accuracy", f.accuracy}, {"f1_macro", f.f1_macro}});
      }
      j["warnings"] = fit.report.warnings;
      *report_json = dup_string(j.dump(2));
    }
    *out = new agro_pipeline{std::move(fit.pipeline)};
  }));
}

agro_status agro_pipeline_save(const agro_pipeline* pipeline, const char* path) {
  return checked(guarded([&] {
    require(pipeline != nullptr && path != nullptr, "pipeline or path is NULL");
    agro::save_pipeline(pipeline->impl, path);
  }));
}

agro_status agro_pipeline_load(const char* path, agro_pipeline** out) {
  return checked(guarded([&] {
    require(path != nullptr && out != nullptr, "path or out is NULL");
    *out = nullptr;
    *out = new agro_pipeline{agro::load_pipeline(path)};
  }));
}

void agro_pipeline_free(agro_pipeline* pipeline) { delete pipeline; }

agro_status agro_pipeline_serialize(const agro_pipeline* pipeline, uint8_t** bytes, size_t* size) {
  return checked(guarded([&] {
    require(pipeline != nullptr && bytes != nullptr && size != nullptr, "NULL argument");
    const auto data = agro::serialize_pipeline(pipeline->impl);
    auto* buf = static_cast<uint8_t*>(std::malloc(data.size()));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, data.data(), data.size());
    *bytes = buf;
    *size = data.size();
  }));
}

agro_status agro_pipeline_deserialize(const uint8_t* bytes, size_t size, agro_pipeline** out) {
  return checked(guarded([&] {
    require(out != nullptr && (bytes != nullptr || size == 0), "NULL argument");
    *out = nullptr;
    *out = new agro_pipeline{agro::deserialize_pipeline({bytes, size})};
  }));
}

size_t agro_pipeline_feature_count(const agro_pipeline* pipeline) {
  return pipeline ? pipeline->impl.schema.size() : 0;
}

const char* agro_pipeline_feature_name(const agro_pipeline* pipeline, size_t index) {
  if (!pipeline || index >= pipeline->impl.schema.size()) return nullptr;
  return pipeline->impl.schema[index].name.c_str();
}

agro_status agro_pipeline_set_feedback_seed(agro_pipeline* pipeline, uint64_t seed) {
  return checked(guarded([&] {
    require(pipeline != nullptr, "pipeline is NULL");
    pipeline->impl.feedback.seed = agro::derive_seed(seed, {4});
  }));
}

agro_status agro_evaluate(const agro_pipeline* pipeline, const char* data_dir, int test_split_only,
                          const uint64_t* seed, char** metrics_json) {
  return checked(guarded([&] {
    require(pipeline != nullptr && data_dir != nullptr && metrics_json != nullptr, "NULL argument");
    *metrics_json = nullptr;
    const auto& p = pipeline->impl;
    const auto dataset = agro::load_dataset_dir(data_dir, p.schema);
    std::vector<std::size_t> idx;
    if (test_split_only) {
      idx = agro::pipeline_split(dataset, p.split, agro::resolve_seed(seed, p.seed)).test;
    } else {
      for (std::size_t i = 0; i < dataset.size(); ++i) idx.push_back(i);
    }
    *metrics_json = dup_string(agro::metrics_to_json(agro::evaluate_pipeline(p, dataset, idx).metrics));
  }));
}

agro_status agro_predict(const agro_pipeline* pipeline, const char* image_path, const double* values,
                         const unsigned char* missing, size_t count, char** recommendation_json) {
  return checked(guarded([&] {
    require(pipeline != nullptr && image_path != nullptr && recommendation_json != nullptr, "NULL argument");
    *recommendation_json = nullptr;
    predict_into(pipeline, agro::decode_image(image_path), values, missing, count, recommendation_json);
  }));
}

agro_status agro_predict_pixels(const agro_pipeline* pipeline, const double* pixels, size_t height, size_t width,
                                size_t channels, const double* values, const unsigned char* missing, size_t count,
                                char** recommendation_json) {
  return checked(guarded([&] {
    require(pipeline != nullptr && recommendation_json != nullptr, "NULL argument");
    require(pixels != nullptr && height && width && channels, "empty image");
    *recommendation_json = nullptr;
    agro::SoilImage image;
    image.height = height;
    image.width = width;
    image.channels = channels;
    image.data.assign(pixels, pixels + height * width * channels);
    predict_into(pipeline, image, values, missing, count, recommendation_json);
  }));
}

agro_status agro_ablate(const char* data_dir, const char* config_json, const uint64_t* seeds, size_t seed_count,
                        char** markdown, char** csv) {
  return checked(guarded([&] {
    require(data_dir != nullptr, "data_dir is NULL");
    require(seeds != nullptr || seed_count == 0, "seeds is NULL");
    if (markdown) *markdown = nullptr;
    if (csv) *csv = nullptr;
    const auto rc = config_json ? agro::parse_run_config(config_json) : agro::RunConfig{};
    agro::AblationConfig ac;
    ac.pipeline = rc.pipeline;
    ac.seeds = seeds ? std::vector<std::uint64_t>(seeds, seeds + seed_count) : rc.seeds;
    if (ac.seeds.size() < 2) {
      throw agro::Error(agro::ErrorCode::kUsage, "the ablation needs at least 2 seeds for paired t-tests");
    }
    const auto dataset = agro::load_dataset_dir(data_dir);
    auto report = agro::run_ablation(dataset, ac);
    agro::significance(report);
    if (markdown) *markdown = dup_string(agro::emit_report(report, "markdown"));
    if (csv) *csv = dup_string(agro::emit_report(report, "csv"));
  }));
}

}  // extern "C"
