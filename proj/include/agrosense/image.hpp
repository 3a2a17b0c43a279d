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
#include <span>
#include <string>
#include <vector>

#include "agrosense/data.hpp"
#include "agrosense/nn.hpp"
#include "agrosense/rng.hpp"

namespace agro {

// Accepts PPM (P3/P6, maxval 255) and AGRT raw tensor files.
SoilImage decode_image(const std::filesystem::path& path);
SoilImage decode_image_bytes(std::span<const std::uint8_t> bytes, std::string provenance = {});

// Intensities are quantized to round(255 v).
std::vector<std::uint8_t> encode_ppm(const SoilImage& image, bool binary = true);
// "AGRT", u32 LE height, width, channels, then float32 LE channel-planar.
std::vector<std::uint8_t> encode_raw_tensor(const SoilImage& image);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

struct ImagePreprocessConfig {
  std::size_t height = 32;
  std::size_t width = 32;

  bool operator==(const ImagePreprocessConfig&) const = default;
};

// Half-pixel bilinear resize of each channel to the configured size; returns
// a {3, H, W} tensor in [0,1].
Tensor preprocess_image(const SoilImage& image, const ImagePreprocessConfig& config);

struct AugmentPolicy {
  double flip_probability = 0.5;
  double max_rotation_deg = 20.0;
  double brightness_min = 0.8;
  double brightness_max = 1.2;
  double zoom_min = 0.9;
  double zoom_max = 1.1;
  std::uint64_t seed = 0;

  bool operator==(const AugmentPolicy&) const = default;
};

struct AugmentParams {
  bool flip = false;
  double rotation_deg = 0.0;
  double zoom = 1.0;
  double brightness = 1.0;
};

AugmentParams sample_augment_params(const AugmentPolicy& policy, Rng& rng);

// flip -> rotate (bilinear, replicated border) -> zoom about the centre ->
// brightness, then clamp to [0,1]. Expects a {C, H, W} tensor.
Tensor apply_augmentation(const Tensor& image, const AugmentParams& params);

Tensor augment(const Tensor& image, const AugmentPolicy& policy, Rng& rng);

// Stream for the augmentation of one sample visit.
inline Rng augment_stream(const AugmentPolicy& policy, std::uint64_t a, std::uint64_t b) {
  return Rng(derive_seed(policy.seed, {a, b}));
}

}  // namespace agro
