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
#include "agrosense/tabular.hpp"

#include <algorithm>
#include <cmath>

#include "agrosense/error.hpp"

namespace agro {

namespace {

void check_width(const NutrientProfile& p, std::size_t expected) {
  if (p.values.size() != expected || p.missing.size() != expected) {
    raise(ErrorCode::kSchema, "profile has " + std::to_string(p.values.size()) + " features, model expects " +
                                  std::to_string(expected));
  }
}

}  // namespace

ImputerModel fit_imputer(std::span<const NutrientProfile> profiles, const Schema& schema, ImputeStrategy strategy) {
  const std::vector<ImputeStrategy> per(schema.size(), strategy);
  return fit_imputer(profiles, schema, per);
}

ImputerModel fit_imputer(std::span<const NutrientProfile> profiles, const Schema& schema,
                         std::span<const ImputeStrategy> per_feature) {
  if (per_feature.size() != schema.size()) raise(ErrorCode::kSchema, "one strategy per feature required");
  if (profiles.empty()) raise(ErrorCode::kEmptyDataset, "cannot fit imputer on zero profiles");
  ImputerModel model;
  model.strategy.assign(per_feature.begin(), per_feature.end());
  model.fill_values.resize(schema.size());
  std::vector<double> column;
  for (std::size_t f = 0; f < schema.size(); ++f) {
    column.clear();
    for (const auto& p : profiles) {
      check_width(p, schema.size());
      if (!p.missing[f]) column.push_back(p.values[f]);
    }
    if (column.empty()) {
      raise(ErrorCode::kUnimputableFeature, "feature '" + schema[f].name + "' is missing in every row");
    }
    double fill = 0.0;
    if (per_feature[f] == ImputeStrategy::kMean) {
      for (double v : column) fill += v;
      fill /= static_cast<double>(column.size());
    } else {
      std::sort(column.begin(), column.end());
      const std::size_t n = column.size();
      fill = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    }
    model.fill_values[f] = fill;
  }
  return model;
}

NutrientProfile impute(const NutrientProfile& profile, const ImputerModel& imputer) {
  check_width(profile, imputer.fill_values.size());
  NutrientProfile out = profile;
  for (std::size_t f = 0; f < out.values.size(); ++f) {
    if (out.missing[f]) {
      out.values[f] = imputer.fill_values[f];
      out.missing[f] = false;
    }
  }
  return out;
}

std::vector<NutrientProfile> impute(std::span<const NutrientProfile> profiles, const ImputerModel& imputer) {
  std::vector<NutrientProfile> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(impute(p, imputer));
  return out;
}

ScalerModel fit_scaler(std::span<const NutrientProfile> profiles, ScalerKind kind) {
  if (profiles.empty()) raise(ErrorCode::kEmptyDataset, "cannot fit scaler on zero profiles");
  const std::size_t m = profiles.front().values.size();
  ScalerModel model;
  model.kind = kind;
  model.first.assign(m, 0.0);
  model.second.assign(m, 0.0);
  for (const auto& p : profiles) {
    check_width(p, m);
    if (p.has_missing()) raise(ErrorCode::kContract, "scaler must be fitted on imputed profiles");
  }
  const double n = static_cast<double>(profiles.size());
  for (std::size_t f = 0; f < m; ++f) {
    if (kind == ScalerKind::kZScore) {
      double mean = 0.0;
      for (const auto& p : profiles) mean += p.values[f];
      mean /= n;
      double ss = 0.0;
      for (const auto& p : profiles) ss += (p.values[f] - mean) * (p.values[f] - mean);
      model.first[f] = mean;
      model.second[f] = std::max(std::sqrt(ss / n), kSigmaFloor);
    } else {
      double lo = profiles.front().values[f];
      double hi = lo;
      for (const auto& p : profiles) {
        lo = std::min(lo, p.values[f]);
        hi = std::max(hi, p.values[f]);
      }
      model.first[f] = lo;
      model.second[f] = hi;
    }
  }
  return model;
}

std::vector<double> transform(const NutrientProfile& profile, const ScalerModel& scaler) {
  check_width(profile, scaler.size());
  if (profile.has_missing()) raise(ErrorCode::kContract, "transform requires imputed profiles");
  std::vector<double> out(scaler.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const double x = profile.values[f];
    if (scaler.kind == ScalerKind::kZScore) {
      out[f] = (x - scaler.first[f]) / scaler.second[f];
    } else {
      const double range = scaler.second[f] - scaler.first[f];
      out[f] = range > 0.0 ? std::clamp((x - scaler.first[f]) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

Matrix transform(std::span<const NutrientProfile> profiles, const ScalerModel& scaler) {
  Matrix out(profiles.size(), scaler.size());
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    const auto row = transform(profiles[r], scaler);
    std::copy(row.begin(), row.end(), out.row(r).begin());
  }
  return out;
}

Matrix inverse_transform(const Matrix& features, const ScalerModel& scaler) {
  if (scaler.kind != ScalerKind::kZScore) raise(ErrorCode::kContract, "inverse transform defined for z-score only");
  if (features.cols != scaler.size()) raise(ErrorCode::kSchema, "feature width does not match scaler");
  Matrix out = features;
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t f = 0; f < out.cols; ++f) out(r, f) = out(r, f) * scaler.second[f] + scaler.first[f];
  }
  return out;
}

}  // namespace agro
