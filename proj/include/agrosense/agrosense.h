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
/* Stable C interface to the AgroSense library.
 *
 * Every function returns an agro_status. On failure a message is available
 * from agro_last_error() on the calling thread until its next API call.
 * Strings handed out through char** parameters are owned by the caller and
 * must be released with agro_string_free().
 *
 * Functions taking an optional `seed` pointer resolve the effective seed as:
 * the pointed-to value, else the AGROSENSE_SEED environment variable, else the
 * seed in the supplied configuration.
 */
#ifndef AGROSENSE_AGROSENSE_H
#define AGROSENSE_AGROSENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AGRO_API __declspec(dllexport)
#else
#define AGRO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum agro_status {
  AGRO_OK = 0,
  AGRO_ERR_INVALID_ARGUMENT = 1,
  AGRO_ERR_USAGE = 2,
  AGRO_ERR_CONFIG = 3,
  AGRO_ERR_SCHEMA = 4,
  AGRO_ERR_EMPTY_DATASET = 5,
  AGRO_ERR_BOUNDS = 6,
  AGRO_ERR_CONTRACT = 7,
  AGRO_ERR_NUMERICAL = 8,
  AGRO_ERR_SHAPE = 9,
  AGRO_ERR_FORMAT = 10,
  AGRO_ERR_CORRUPT_FILE = 11,
  AGRO_ERR_UNIMPUTABLE_FEATURE = 12,
  AGRO_ERR_DEGENERATE_DATA = 13,
  AGRO_ERR_DEGENERATE_VARIANCE = 14,
  AGRO_ERR_UNDEFINED_AUC = 15,
  AGRO_ERR_INCOMPATIBLE_ARTIFACT = 16,
  AGRO_ERR_CORRUPT_ARTIFACT = 17,
  AGRO_ERR_FILESYSTEM = 18,
  AGRO_ERR_INTERNAL = 99
} agro_status;

typedef struct agro_pipeline agro_pipeline;

AGRO_API const char* agro_version(void);
AGRO_API const char* agro_status_name(agro_status status);
AGRO_API const char* agro_last_error(void);
AGRO_API void agro_string_free(char* s);

/* Writes a synthetic dataset (images/, data.csv, manifest.json) to out_dir.
 * spec_json may be NULL for the defaults. */
AGRO_API agro_status agro_synth(const char* spec_json, const char* out_dir, const uint64_t* seed);

/* Trains on the training part of the seed's stratified split of data_dir.
 * config_json may be NULL. report_json (optional) receives training
 * histories plus the split and any warnings. */
AGRO_API agro_status agro_train(const char* data_dir, const char* config_json, const uint64_t* seed,
                                agro_pipeline** out, char** report_json);

AGRO_API agro_status agro_pipeline_save(const agro_pipeline* pipeline, const char* path);
AGRO_API agro_status agro_pipeline_load(const char* path, agro_pipeline** out);
AGRO_API void agro_pipeline_free(agro_pipeline* pipeline);

/* Serialized artifact bytes, for in-memory round trips. */
AGRO_API agro_status agro_pipeline_serialize(const agro_pipeline* pipeline, uint8_t** bytes, size_t* size);
AGRO_API agro_status agro_pipeline_deserialize(const uint8_t* bytes, size_t size, agro_pipeline** out);
AGRO_API void agro_bytes_free(uint8_t* bytes);

AGRO_API size_t agro_pipeline_feature_count(const agro_pipeline* pipeline);
/* Borrowed pointer, valid while the pipeline lives; NULL when out of range. */
AGRO_API const char* agro_pipeline_feature_name(const agro_pipeline* pipeline, size_t index);

/* Metrics of the pipeline on data_dir. With test_split_only nonzero only the
 * held-out part of the seed's stratified split is scored (by default the
 * split the pipeline was trained with); otherwise every sample. metrics_json
 * receives a flat MetricsReport object. */
AGRO_API agro_status agro_evaluate(const agro_pipeline* pipeline, const char* data_dir, int test_split_only,
                                   const uint64_t* seed, char** metrics_json);

/* Reseeds the augmentation stream of the low-confidence feedback loop. */
AGRO_API agro_status agro_pipeline_set_feedback_seed(agro_pipeline* pipeline, uint64_t seed);

/* One recommendation as single-line JSON. `values` holds one entry per schema
 * feature; a nonzero missing[i] (missing may be NULL) marks entry i as absent
 * so that it is imputed. */
AGRO_API agro_status agro_predict(const agro_pipeline* pipeline, const char* image_path, const double* values,
                                  const unsigned char* missing, size_t count, char** recommendation_json);

/* As agro_predict with an in-memory planar image of intensities in [0,1]. */
AGRO_API agro_status agro_predict_pixels(const agro_pipeline* pipeline, const double* pixels, size_t height,
                                         size_t width, size_t channels, const double* values,
                                         const unsigned char* missing, size_t count, char** recommendation_json);

/* Runs the three-arm modality ablation with significance tests. seeds may be
 * NULL to use the configuration's list. Either output may be NULL. */
AGRO_API agro_status agro_ablate(const char* data_dir, const char* config_json, const uint64_t* seeds,
                                 size_t seed_count, char** markdown, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* AGROSENSE_AGROSENSE_H */
