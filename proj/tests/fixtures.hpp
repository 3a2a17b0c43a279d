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

#include "agrosense/datagen.hpp"
#include "agrosense/pipeline.hpp"

namespace agro::test {

// Small but learnable synthetic set, 16x16 images.
inline Dataset small_dataset(std::size_t per_class = 80, std::uint64_t seed = 7) {
  SynthSpec spec;
  spec.samples_per_class = per_class;
  spec.image_size = 16;
  spec.seed = seed;
  return generate_dataset(spec);
}

// Minutes-to-seconds settings that still reach high accuracy on small_dataset.
inline PipelineConfig small_config(std::uint64_t seed = 42) {
  PipelineConfig c;
  c.soil.image = {16, 16};
  c.soil.train.epochs = 8;
  c.soil.train.optimizer.lr = 3e-3;
  c.recommender.mlp.train.epochs = 80;
  c.recommender.mlp.train.optimizer.lr = 3e-3;
  apply_seed(c, seed);
  return c;
}

}  // namespace agro::test
