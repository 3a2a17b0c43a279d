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
#include <filesystem>
#include <string>
#include <vector>

#include "agrosense/data.hpp"

namespace agro {

enum class DependenceMode { kBoth, kTabularOnly, kImageOnly };

struct SynthSpec {
  std::vector<std::string> soil_classes = default_soil_vocabulary().names();
  std::vector<std::string> crops{"rice", "maize", "chickpea", "cotton", "jute", "coffee", "lentil", "banana"};
  std::size_t samples_per_class = 300;
  std::size_t image_size = 32;
  double nutrient_noise = 0.5;
  double texture_noise = 0.15;
  DependenceMode mode = DependenceMode::kBoth;
  std::uint64_t seed = 42;

  void validate() const;
  bool operator==(const SynthSpec&) const = default;
};

// Unknown keys are rejected.
SynthSpec synth_spec_from_json(const std::string& text);
std::string synth_spec_to_json(const SynthSpec& spec);

// Indices of the two features whose signs (relative to their centres) form the
// 2-bit nutrient pattern: temperature and rainfall.
inline constexpr std::size_t kPatternFeatureA = 4;
inline constexpr std::size_t kPatternFeatureB = 6;
inline constexpr std::size_t kPatternCount = 4;

std::vector<double> synth_feature_centers();
int nutrient_pattern(const NutrientProfile& profile);

// Crop index for (soil class, nutrient pattern) under the spec's mode.
int crop_rule(const SynthSpec& spec, int soil_class, int pattern);

Dataset generate_dataset(const SynthSpec& spec);

// images/<id>.ppm (P6), data.csv and manifest.json. `spec` may be null for
// datasets that were not generated.
void export_dataset(const Dataset& dataset, const std::filesystem::path& dir, const SynthSpec* spec = nullptr);

std::string dataset_manifest_json(const Dataset& dataset, const SynthSpec* spec);

}  // namespace agro
