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
#include "agrosense/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "agrosense/error.hpp"
#include "agrosense/image.hpp"
#include "agrosense/rng.hpp"
#include "json.hpp"

namespace agro {

namespace {

// Latent-to-physical mapping per default-schema feature: value = centre + scale * z.
constexpr double kCenters[7] = {50.0, 50.0, 50.0, 6.5, 25.0, 70.0, 150.0};
constexpr double kScales[7] = {20.0, 15.0, 15.0, 0.8, 5.0, 10.0, 40.0};
constexpr std::size_t kSoilLinkedFeatures = 3;  // N, P, K
constexpr double kPatternOffset = 1.5;

const char* mode_name(DependenceMode m) {
  switch (m) {
    case DependenceMode::kBoth:
      return "both";
    case DependenceMode::kTabularOnly:
      return "tabular-only";
    case DependenceMode::kImageOnly:
      return "image-only";
  }
  return "both";
}

DependenceMode parse_mode(const std::string& s) {
  if (s == "both") return DependenceMode::kBoth;
  if (s == "tabular-only") return DependenceMode::kTabularOnly;
  if (s == "image-only") return DependenceMode::kImageOnly;
  raise(ErrorCode::kConfig, "unknown dependence mode '" + s + "'");
}

std::array<double, 3> base_color(std::size_t soil, std::uint64_t seed) {
  static constexpr double kPalette[7][3] = {
      {0.80, 0.70, 0.50},  // Alluvial
      {0.15, 0.15, 0.18},  // Black
      {0.55, 0.55, 0.60},  // Clay
      {0.80, 0.20, 0.20},  // Red
      {0.75, 0.45, 0.15},  // Laterite
      {0.35, 0.25, 0.15},  // Peat
      {0.85, 0.80, 0.25},  // Yellow
  };
  if (soil < 7) return {kPalette[soil][0], kPalette[soil][1], kPalette[soil][2]};
  Rng rng(derive_seed(seed, {soil, 0x636f6c6f72ULL}));
  return {rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85)};
}

SoilImage render_texture(std::size_t soil, const SynthSpec& spec, Rng& rng) {
  const std::size_t n = spec.image_size;
  std::vector<double> noise(n * n);
  for (double& v : noise) v = rng.uniform(-spec.texture_noise, spec.texture_noise);
  // Granularity: box blur of the noise field with radius soil mod 3.
  const std::size_t radius = soil % 3;
  if (radius > 0) {
    std::vector<double> blurred(n * n, 0.0);
    const auto r = static_cast<std::ptrdiff_t>(radius);
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        int count = 0;
        for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
          for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
            const auto yy = static_cast<std::ptrdiff_t>(y) + dy;
            const auto xx = static_cast<std::ptrdiff_t>(x) + dx;
            if (yy < 0 || xx < 0 || yy >= static_cast<std::ptrdiff_t>(n) || xx >= static_cast<std::ptrdiff_t>(n)) continue;
            acc += noise[static_cast<std::size_t>(yy) * n + static_cast<std::size_t>(xx)];
            ++count;
          }
        }
        blurred[y * n + x] = acc / count;
      }
    }
    noise = std::move(blurred);
  }
  const auto color = base_color(soil, spec.seed);
  SoilImage img;
  img.height = img.width = n;
  img.data.resize(3 * n * n);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n * n; ++i) {
      const double v = std::clamp(color[c] + noise[i], 0.0, 1.0);
      img.data[c * n * n + i] = std::round(v * 255.0) / 255.0;
    }
  }
  return img;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (soil_classes.empty()) raise(ErrorCode::kContract, "synth spec needs at least one soil class");
  if (crops.empty()) raise(ErrorCode::kContract, "synth spec needs at least one crop");
  if (samples_per_class < 1) raise(ErrorCode::kContract, "samples per class must be >= 1");
  if (image_size < 8) raise(ErrorCode::kContract, "image size must be >= 8");
  if (!(nutrient_noise >= 0.0) || !(texture_noise >= 0.0)) raise(ErrorCode::kContract, "noise must be >= 0");
  if (mode == DependenceMode::kBoth && crops.size() < 2) {
    raise(ErrorCode::kContract, "'both' mode needs at least 2 crops per soil class");
  }
  Vocabulary check_soil(soil_classes);
  Vocabulary check_crops(crops);
}

SynthSpec synth_spec_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) raise(ErrorCode::kConfig, "synth spec is not a JSON object");
  SynthSpec spec;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "soil_classes") {
        spec.soil_classes = value.get<std::vector<std::string>>();
      } else if (key == "crops") {
        spec.crops = value.get<std::vector<std::string>>();
      } else if (key == "samples_per_class") {
        spec.samples_per_class = value.get<std::size_t>();
      } else if (key == "image_size") {
        spec.image_size = value.get<std::size_t>();
      } else if (key == "nutrient_noise") {
        spec.nutrient_noise = value.get<double>();
      } else if (key == "texture_noise") {
        spec.texture_noise = value.get<double>();
      } else if (key == "mode") {
        spec.mode = parse_mode(value.get<std::string>());
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else {
        raise(ErrorCode::kConfig, "unknown synth spec key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kConfig, std::string("synth spec: ") + e.what());
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    raise(ErrorCode::kConfig, e.what());
  }
  return spec;
}

std::string synth_spec_to_json(const SynthSpec& spec) {
  nlohmann::ordered_json j;
  j["soil_classes"] = spec.soil_classes;
  j["crops"] = spec.crops;
  j["samples_per_class"] = spec.samples_per_class;
  j["image_size"] = spec.image_size;
  j["nutrient_noise"] = spec.nutrient_noise;
  j["texture_noise"] = spec.texture_noise;
  j["mode"] = mode_name(spec.mode);
  j["seed"] = spec.seed;
  return j.dump();
}

std::vector<double> synth_feature_centers() { return {std::begin(kCenters), std::end(kCenters)}; }

int nutrient_pattern(const NutrientProfile& profile) {
  if (profile.values.size() <= kPatternFeatureB) raise(ErrorCode::kSchema, "profile lacks pattern features");
  const int a = profile.values[kPatternFeatureA] > kCenters[kPatternFeatureA] ? 1 : 0;
  const int b = profile.values[kPatternFeatureB] > kCenters[kPatternFeatureB] ? 1 : 0;
  return 2 * a + b;
}

int crop_rule(const SynthSpec& spec, int soil_class, int pattern) {
  const int c = static_cast<int>(spec.crops.size());
  switch (spec.mode) {
    case DependenceMode::kBoth:
      return (soil_class + pattern) % c;
    case DependenceMode::kTabularOnly:
      return pattern % c;
    case DependenceMode::kImageOnly:
      return soil_class % c;
  }
  return 0;
}

Dataset generate_dataset(const SynthSpec& spec) {
  spec.validate();
  Dataset ds;
  ds.schema = default_schema();
  ds.soil_vocab = Vocabulary(spec.soil_classes);
  ds.crop_vocab = Vocabulary(spec.crops);
  const std::size_t n_soil = spec.soil_classes.size();
  const double sigma = spec.nutrient_noise;

  // Class means of N, P, K span 3 sigma, each feature ordering the classes
  // differently.
  std::vector<std::vector<double>> class_mean(kSoilLinkedFeatures, std::vector<double>(n_soil, 0.0));
  for (std::size_t f = 0; f < kSoilLinkedFeatures; ++f) {
    std::vector<std::size_t> rank(n_soil);
    std::iota(rank.begin(), rank.end(), 0);
    Rng perm(derive_seed(spec.seed, {f, 0x7065726dULL}));
    perm.shuffle(std::span(rank));
    for (std::size_t s = 0; s < n_soil; ++s) {
      class_mean[f][s] = n_soil > 1 ? 3.0 * sigma * (static_cast<double>(rank[s]) / static_cast<double>(n_soil - 1) - 0.5)
                                    : 0.0;
    }
  }

  std::size_t index = 0;
  for (std::size_t s = 0; s < n_soil; ++s) {
    for (std::size_t k = 0; k < spec.samples_per_class; ++k, ++index) {
      Rng rng(derive_seed(spec.seed, {index, 0x73616d706c65ULL}));
      PairedSample sample;
      char id[32];
      std::snprintf(id, sizeof id, "s%05zu", index);
      sample.id = id;
      sample.soil_class = static_cast<int>(s);

      std::vector<double> z(7, 0.0);
      for (std::size_t f = 0; f < kSoilLinkedFeatures; ++f) z[f] = rng.normal(class_mean[f][s], sigma);
      z[3] = rng.normal(0.0, sigma);
      z[5] = rng.normal(0.0, sigma);
      for (std::size_t f : {kPatternFeatureA, kPatternFeatureB}) {
        z[f] = rng.normal(rng.bernoulli(0.5) ? kPatternOffset : -kPatternOffset, sigma);
      }
      std::vector<double> values(7);
      for (std::size_t f = 0; f < 7; ++f) values[f] = kCenters[f] + kScales[f] * z[f];
      values[3] = std::clamp(values[3], 0.0, 14.0);
      values[5] = std::clamp(values[5], 0.0, 100.0);
      values[6] = std::max(values[6], 0.0);
      sample.profile = NutrientProfile(std::move(values));

      sample.image = render_texture(s, spec, rng);
      sample.image.provenance = "synthetic:" + std::to_string(spec.seed) + ":" + sample.id;
      sample.crop = crop_rule(spec, static_cast<int>(s), nutrient_pattern(sample.profile));
      ds.samples.push_back(std::move(sample));
    }
  }
  ds.validate();
  return ds;
}

std::string dataset_manifest_json(const Dataset& dataset, const SynthSpec* spec) {
  nlohmann::ordered_json j;
  if (spec) {
    j["spec"] = nlohmann::ordered_json::parse(synth_spec_to_json(*spec));
    j["seed"] = spec->seed;
  }
  j["samples"] = dataset.size();
  j["soil_vocab"] = dataset.soil_vocab.names();
  j["crop_vocab"] = dataset.crop_vocab.names();
  nlohmann::ordered_json schema = nlohmann::ordered_json::array();
  for (const auto& f : dataset.schema) schema.push_back({{"name", f.name}, {"unit", f.unit}});
  j["schema"] = schema;
  if (spec) {
    j["pattern_features"] = {dataset.schema.at(kPatternFeatureA).name, dataset.schema.at(kPatternFeatureB).name};
    j["pattern_thresholds"] = {kCenters[kPatternFeatureA], kCenters[kPatternFeatureB]};
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (std::size_t s = 0; s < spec->soil_classes.size(); ++s) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t p = 0; p < kPatternCount; ++p) {
        row.push_back(spec->crops[static_cast<std::size_t>(crop_rule(*spec, static_cast<int>(s), static_cast<int>(p)))]);
      }
      table[spec->soil_classes[s]] = row;
    }
    j["crop_rule"] = table;
  }
  return j.dump(2);
}

void export_dataset(const Dataset& dataset, const std::filesystem::path& dir, const SynthSpec* spec) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (ec) raise(ErrorCode::kFilesystem, "cannot create '" + (dir / "images").string() + "': " + ec.message());

  std::ofstream csv(dir / "data.csv", std::ios::binary | std::ios::trunc);
  if (!csv) raise(ErrorCode::kFilesystem, "cannot write '" + (dir / "data.csv").string() + "'");
  csv << "id";
  for (const auto& f : dataset.schema) csv << ',' << f.name;
  csv << ",soil_class,crop\n";
  for (const auto& s : dataset.samples) {
    csv << s.id;
    for (std::size_t f = 0; f < s.profile.size(); ++f) {
      csv << ',';
      if (!s.profile.missing[f]) csv << format_double(s.profile.values[f]);
    }
    csv << ',' << (s.soil_class ? dataset.soil_vocab.name(*s.soil_class) : "");
    csv << ',' << (s.crop ? dataset.crop_vocab.name(*s.crop) : "") << '\n';
    if (!s.image.empty()) write_bytes(dir / "images" / (s.id + ".ppm"), encode_ppm(s.image));
  }
  if (!csv) raise(ErrorCode::kFilesystem, "write failed for data.csv");

  std::ofstream manifest(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!manifest) raise(ErrorCode::kFilesystem, "cannot write manifest.json");
  manifest << dataset_manifest_json(dataset, spec) << '\n';
}

}  // namespace agro
