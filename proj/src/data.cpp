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
#include "agrosense/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "agrosense/error.hpp"
#include "agrosense/image.hpp"
#include "agrosense/rng.hpp"
#include "json.hpp"

namespace agro {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kFilesystem, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Schema default_schema() {
  return {{"N", "mg/kg"},         {"P", "mg/kg"},    {"K", "mg/kg"},    {"pH", "unitless"},
          {"temperature", "°C"}, {"humidity", "%"}, {"rainfall", "mm"}};
}

bool NutrientProfile::has_missing() const {
  return std::any_of(missing.begin(), missing.end(), [](bool b) { return b; });
}

void validate_profile(const NutrientProfile& profile, const Schema& schema) {
  if (profile.values.size() != schema.size() || profile.missing.size() != schema.size()) {
    raise(ErrorCode::kSchema, "profile has " + std::to_string(profile.values.size()) + " features, schema has " +
                                  std::to_string(schema.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (profile.missing[i]) continue;
    const double v = profile.values[i];
    const auto name = lower(schema[i].name);
    if (!std::isfinite(v)) raise(ErrorCode::kSchema, "non-finite value for '" + schema[i].name + "'");
    if (name == "ph" && (v < 0.0 || v > 14.0)) {
      raise(ErrorCode::kSchema, "pH value " + std::to_string(v) + " outside [0,14]");
    }
    if (name == "humidity" && (v < 0.0 || v > 100.0)) {
      raise(ErrorCode::kSchema, "humidity value " + std::to_string(v) + " outside [0,100]");
    }
  }
}

Vocabulary::Vocabulary(std::vector<std::string> names) {
  for (auto& n : names) {
    if (lookup_.count(n)) raise(ErrorCode::kSchema, "duplicate label name '" + n + "'");
    intern(n);
  }
}

int Vocabulary::intern(std::string_view name) {
  if (auto it = lookup_.find(std::string(name)); it != lookup_.end()) return it->second;
  const int idx = static_cast<int>(names_.size());
  names_.emplace_back(name);
  lookup_.emplace(names_.back(), idx);
  return idx;
}

std::optional<int> Vocabulary::find(std::string_view name) const {
  if (auto it = lookup_.find(std::string(name)); it != lookup_.end()) return it->second;
  return std::nullopt;
}

int Vocabulary::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  raise(ErrorCode::kSchema, "unknown label '" + std::string(name) + "'");
}

const std::string& Vocabulary::name(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= names_.size()) {
    raise(ErrorCode::kBounds, "label index " + std::to_string(index) + " out of range");
  }
  return names_[static_cast<std::size_t>(index)];
}

Vocabulary default_soil_vocabulary() {
  return Vocabulary({"Alluvial", "Black", "Clay", "Red", "Laterite", "Peat", "Yellow"});
}

std::vector<NutrientProfile> Dataset::profiles() const {
  std::vector<NutrientProfile> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.profile);
  return out;
}

std::vector<NutrientProfile> Dataset::profiles(std::span<const std::size_t> indices) const {
  std::vector<NutrientProfile> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(samples.at(i).profile);
  return out;
}

std::vector<int> Dataset::crop_labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.crop) raise(ErrorCode::kContract, "sample '" + s.id + "' has no crop label");
    out.push_back(*s.crop);
  }
  return out;
}

std::vector<int> Dataset::soil_labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.soil_class) raise(ErrorCode::kContract, "sample '" + s.id + "' has no soil label");
    out.push_back(*s.soil_class);
  }
  return out;
}

void Dataset::validate() const {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!seen.emplace(s.id, i).second) raise(ErrorCode::kSchema, "duplicate sample id '" + s.id + "'");
    validate_profile(s.profile, schema);
    if (s.soil_class && (*s.soil_class < 0 || static_cast<std::size_t>(*s.soil_class) >= soil_vocab.size())) {
      raise(ErrorCode::kSchema, "sample '" + s.id + "' soil label outside vocabulary");
    }
    if (s.crop && (*s.crop < 0 || static_cast<std::size_t>(*s.crop) >= crop_vocab.size())) {
      raise(ErrorCode::kSchema, "sample '" + s.id + "' crop label outside vocabulary");
    }
  }
}

Dataset parse_tabular_csv(std::string_view text, const Schema& schema) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto pos = text.find('\n', start);
      if (pos == std::string_view::npos) pos = text.size();
      auto line = text.substr(start, pos - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!trim(line).empty()) lines.push_back(line);
      start = pos + 1;
    }
  }
  if (lines.empty()) raise(ErrorCode::kEmptyDataset, "CSV has no header row");

  const auto header = split_csv_line(lines.front());
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(lower(header[i]), i);

  std::vector<std::size_t> feature_col(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    auto it = column.find(lower(schema[f].name));
    if (it == column.end()) raise(ErrorCode::kSchema, "missing required column '" + schema[f].name + "'");
    feature_col[f] = it->second;
  }
  auto optional_col = [&](std::initializer_list<const char*> names) -> std::optional<std::size_t> {
    for (const char* n : names) {
      if (auto it = column.find(n); it != column.end()) return it->second;
    }
    return std::nullopt;
  };
  const auto crop_col = optional_col({"label", "crop"});
  const auto soil_col = optional_col({"soil_class", "soil"});
  const auto id_col = optional_col({"id"});

  Dataset ds;
  ds.schema = schema;
  if (lines.size() < 2) raise(ErrorCode::kEmptyDataset, "CSV has no data rows");
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv_line(lines[r]);
    auto cell = [&](std::size_t c) -> std::string_view { return c < cells.size() ? cells[c] : std::string_view{}; };
    PairedSample s;
    s.id = id_col ? std::string(cell(*id_col)) : "row" + std::to_string(r - 1);
    s.profile.values.assign(schema.size(), 0.0);
    s.profile.missing.assign(schema.size(), false);
    for (std::size_t f = 0; f < schema.size(); ++f) {
      if (auto v = parse_double(cell(feature_col[f]))) {
        s.profile.values[f] = *v;
      } else {
        s.profile.missing[f] = true;
      }
    }
    if (crop_col && !cell(*crop_col).empty()) s.crop = ds.crop_vocab.intern(cell(*crop_col));
    if (soil_col && !cell(*soil_col).empty()) s.soil_class = ds.soil_vocab.intern(cell(*soil_col));
    ds.samples.push_back(std::move(s));
  }
  ds.validate();
  return ds;
}

Dataset load_tabular_csv(const std::filesystem::path& path, const Schema& schema) {
  return parse_tabular_csv(read_file(path), schema);
}

Dataset load_dataset_dir(const std::filesystem::path& dir, const Schema& schema) {
  Dataset ds = load_tabular_csv(dir / "data.csv", schema);
  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    const auto manifest = nlohmann::json::parse(read_file(manifest_path), nullptr, false);
    if (manifest.is_discarded()) raise(ErrorCode::kFormat, "manifest.json is not valid JSON");
    // Re-index labels against the manifest's vocabulary order.
    auto remap = [&](const char* key, Vocabulary& vocab, auto member) {
      if (!manifest.contains(key)) return;
      Vocabulary fixed(manifest.at(key).get<std::vector<std::string>>());
      for (auto& s : ds.samples) {
        auto& label = s.*member;
        if (label) label = fixed.index_of(vocab.name(*label));
      }
      vocab = std::move(fixed);
    };
    remap("soil_vocab", ds.soil_vocab, &PairedSample::soil_class);
    remap("crop_vocab", ds.crop_vocab, &PairedSample::crop);
  }
  for (auto& s : ds.samples) {
    const auto image_path = dir / "images" / (s.id + ".ppm");
    if (std::filesystem::exists(image_path)) s.image = decode_image(image_path);
  }
  ds.validate();
  return ds;
}

std::vector<double> one_hot(int index, std::size_t class_count) {
  if (index < 0 || static_cast<std::size_t>(index) >= class_count) {
    raise(ErrorCode::kBounds,
          "one-hot index " + std::to_string(index) + " out of range for " + std::to_string(class_count) + " classes");
  }
  std::vector<double> v(class_count, 0.0);
  v[static_cast<std::size_t>(index)] = 1.0;
  return v;
}

std::vector<std::size_t> largest_remainder(std::size_t n, std::span<const double> ratios) {
  std::vector<std::size_t> counts(ratios.size());
  std::vector<double> frac(ratios.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double quota = ratios[i] * static_cast<double>(n);
    // Guard against 0.8*10 = 7.999999... style quotas.
    const double fl = std::floor(quota + 1e-9);
    counts[i] = static_cast<std::size_t>(fl);
    frac[i] = std::max(0.0, quota - fl);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % order.size(), ++assigned) ++counts[order[i]];
  return counts;
}

namespace {

std::vector<std::vector<std::size_t>> group_by_label(std::span<const int> labels) {
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) raise(ErrorCode::kContract, "negative class label");
    max_label = std::max(max_label, l);
  }
  std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < labels.size(); ++i) groups[static_cast<std::size_t>(labels[i])].push_back(i);
  return groups;
}

}  // namespace

SplitAssignment stratified_split(std::span<const int> labels, const SplitRatios& ratios, std::uint64_t seed) {
  const double parts[3] = {ratios.train, ratios.val, ratios.test};
  for (double p : parts) {
    if (!(p > 0.0)) raise(ErrorCode::kContract, "split ratios must be positive");
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) > 1e-9) {
    raise(ErrorCode::kContract, "split ratios must sum to 1");
  }
  if (labels.empty()) raise(ErrorCode::kEmptyDataset, "cannot split an empty dataset");

  SplitAssignment out;
  const auto groups = group_by_label(labels);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    auto members = groups[c];
    if (members.empty()) continue;
    if (members.size() < 3) {
      out.warnings.push_back("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                             " sample(s); all assigned to train");
      out.train.insert(out.train.end(), members.begin(), members.end());
      continue;
    }
    Rng rng(derive_seed(seed, {c}));
    rng.shuffle(std::span(members));
    const auto counts = largest_remainder(members.size(), parts);
    auto it = members.begin();
    out.train.insert(out.train.end(), it, it + static_cast<std::ptrdiff_t>(counts[0]));
    it += static_cast<std::ptrdiff_t>(counts[0]);
    out.val.insert(out.val.end(), it, it + static_cast<std::ptrdiff_t>(counts[1]));
    it += static_cast<std::ptrdiff_t>(counts[1]);
    out.test.insert(out.test.end(), it, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

SplitAssignment stratified_split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed,
                                 StratifyBy by) {
  const auto labels = by == StratifyBy::kCrop ? dataset.crop_labels() : dataset.soil_labels();
  return stratified_split(labels, ratios, seed);
}

std::string split_to_json(const SplitAssignment& split, const Dataset& dataset) {
  auto ids = [&](const std::vector<std::size_t>& idx) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto i : idx) arr.push_back(dataset.samples.at(i).id);
    return arr;
  };
  nlohmann::json j;
  j["train"] = ids(split.train);
  j["val"] = ids(split.val);
  j["test"] = ids(split.test);
  j["warnings"] = split.warnings;
  return j.dump();
}

KFoldResult stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) raise(ErrorCode::kContract, "k-fold needs k >= 2");
  if (labels.empty()) raise(ErrorCode::kEmptyDataset, "cannot fold an empty dataset");
  KFoldResult out;
  const auto groups = group_by_label(labels);
  std::vector<std::vector<std::size_t>> val(k);
  // The fold cursor carries over between classes so fold totals stay balanced.
  std::size_t cursor = 0;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    auto members = groups[c];
    if (members.empty()) continue;
    if (members.size() < k) {
      out.warnings.push_back("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                             " sample(s) for " + std::to_string(k) + " folds; some folds lack it");
    }
    Rng rng(derive_seed(seed, {c, 0x6b666f6cULL}));
    rng.shuffle(std::span(members));
    for (auto idx : members) {
      val[cursor].push_back(idx);
      cursor = (cursor + 1) % k;
    }
  }
  for (std::size_t f = 0; f < k; ++f) {
    Fold fold;
    fold.val = std::move(val[f]);
    std::sort(fold.val.begin(), fold.val.end());
    std::vector<bool> in_val(labels.size(), false);
    for (auto i : fold.val) in_val[i] = true;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!in_val[i]) fold.train.push_back(i);
    }
    out.folds.push_back(std::move(fold));
  }
  return out;
}

KFoldResult stratified_kfold(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  const auto labels = dataset.crop_labels();
  return stratified_kfold(labels, k, seed);
}

}  // namespace agro
