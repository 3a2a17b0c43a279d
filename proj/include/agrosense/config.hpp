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

#include <cstdint>
#include <string>
#include <vector>

#include "agrosense/pipeline.hpp"

namespace agro {

// Everything a CLI run can override. Defaults match the module defaults.
struct RunConfig {
  PipelineConfig pipeline;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};  // ablation seeds
  std::string data_path;
  std::string out_path;
};

// Parses a JSON run configuration. Any unknown key or bad value raises a config
// error naming the key path.
//
//   {"seed": 42,
//    "image": {"size": 32},
//    "preprocess": {"impute": "mean"|"median", "scaler": "zscore"|"minmax"},
//    "cnn": {"blocks": [8, 16], "residual": false, "head": 64, "epochs": 15,
//            "batch_size": 32, "optimizer": "adam"|"sgd", "lr": 1e-3,
//            "momentum": 0.9, "augment": true},
//    "augment": {"flip_probability": 0.5, "max_rotation_deg": 20,
//                "brightness": [0.8, 1.2], "zoom": [0.9, 1.1]},
//    "scheduler": {"factor": 0.5, "patience": 3, "min_delta": 1e-4, "min_lr": 1e-6},
//    "recommender": {"backend": "mlp"|"gbdt", "hidden": 64, "epochs": 60,
//                    "batch_size": 32, "optimizer": "adam", "lr": 1e-3,
//                    "momentum": 0.9, "kfold": 0},
//    "gbdt": {"rounds": 100, "learning_rate": 0.1, "max_depth": 4,
//             "lambda": 1, "gamma": 0, "min_child_hessian": 1},
//    "fusion": {"mode": "hard"|"soft", "threshold": 0.6, "n_tta": 8},
//    "split": {"train": 0.8, "val": 0.1, "test": 0.1},
//    "seeds": [1, 2, 3, 4, 5],
//    "paths": {"data": "", "out": ""}}
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

// Seed precedence: explicit flag, then AGROSENSE_SEED, then the config value.
std::uint64_t resolve_seed(const std::uint64_t* flag, std::uint64_t config_seed);

}  // namespace agro
