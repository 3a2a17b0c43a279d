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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace agro {

struct FeatureSpec {
  std::string name;
  std::string unit;

  bool operator==(const FeatureSpec&) const = default;
};

using Schema = std::vector<FeatureSpec>;

// N, P, K, pH, temperature, humidity, rainfall.
Schema default_schema();

// One tabular soil record in schema order.
struct NutrientProfile {
  std::vector<double> values;
  std::vector<bool> missing;

  NutrientProfile() = default;
  explicit NutrientProfile(std::vector<double> v)
      : values(std::move(v)), missing(values.size(), false) {}

  std::size_t size() const { return values.size(); }
  bool has_missing() const;
  bool operator==(const NutrientProfile&) const = default;
};

// Throws a schema error if the profile length disagrees with the schema or a
// present pH / humidity value is outside its physical range.
void validate_profile(const NutrientProfile& profile, const Schema& schema);

// H x W x 3 intensities in [0,1], row-major within a channel, channels planar.
struct SoilImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 3;
  std::vector<double> data;
  std::string provenance;

  bool empty() const { return data.empty(); }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }
  bool operator==(const SoilImage& o) const {
    return height == o.height && width == o.width && channels == o.channels && data == o.data;
  }
};

// Ordered, duplicate-free list of label names.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  // Index of `name`, appending it when unseen.
  int intern(std::string_view name);
  std::optional<int> find(std::string_view name) const;
  int index_of(std::string_view name) const;  // throws schema error when absent
  const std::string& name(int index) const;

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  bool operator==(const Vocabulary& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> lookup_;
};

// Alluvial, Black, Clay, Red, Laterite, Peat, Yellow.
Vocabulary default_soil_vocabulary();

struct PairedSample {
  std::string id;
  SoilImage image;
  NutrientProfile profile;
  std::optional<int> soil_class;
  std::optional<int> crop;

  bool operator==(const PairedSample&) const = default;
};

struct Dataset {
  std::vector<PairedSample> samples;
  Vocabulary soil_vocab;
  Vocabulary crop_vocab;
  Schema schema;

  std::size_t size() const { return samples.size(); }
  std::vector<NutrientProfile> profiles() const;
  std::vector<NutrientProfile> profiles(std::span<const std::size_t> indices) const;
  // Crop labels; throws a contract error if any sample lacks one.
  std::vector<int> crop_labels() const;
  std::vector<int> soil_labels() const;

  // Throws on repeated ids or labels outside the vocabularies. Profiles are
  // also checked against the schema.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

// Parses a header-first, comma-separated CSV. Header names are matched to the
// schema case-insensitively; a "label" or "crop" column supplies crop labels,
// "soil_class" soil labels, "id" sample ids. Images are left empty.
Dataset load_tabular_csv(const std::filesystem::path& path, const Schema& schema = default_schema());
Dataset parse_tabular_csv(std::string_view text, const Schema& schema = default_schema());

// Loads data.csv plus images/<id>.ppm from an exported directory. If a
// manifest.json is present its vocabularies fix the label order.
Dataset load_dataset_dir(const std::filesystem::path& dir, const Schema& schema = default_schema());

std::vector<double> one_hot(int index, std::size_t class_count);

enum class StratifyBy { kCrop, kSoil };

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

// Disjoint index sets into a dataset, each in ascending order.
struct SplitAssignment {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::vector<std::string> warnings;

  bool operator==(const SplitAssignment&) const = default;
};

// Largest-remainder allocation of `n` items over the ratios; ties go to the
// earlier part.
std::vector<std::size_t> largest_remainder(std::size_t n, std::span<const double> ratios);

SplitAssignment stratified_split(std::span<const int> labels, const SplitRatios& ratios, std::uint64_t seed);
SplitAssignment stratified_split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed,
                                 StratifyBy by = StratifyBy::kCrop);

std::string split_to_json(const SplitAssignment& split, const Dataset& dataset);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;

  bool operator==(const Fold&) const = default;
};

struct KFoldResult {
  std::vector<Fold> folds;
  std::vector<std::string> warnings;
};

KFoldResult stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed);
KFoldResult stratified_kfold(const Dataset& dataset, std::size_t k, std::uint64_t seed);

}  // namespace agro
