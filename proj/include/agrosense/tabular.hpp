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

#include <span>
#include <vector>

#include "agrosense/data.hpp"
#include "agrosense/matrix.hpp"

namespace agro {

enum class ImputeStrategy { kMean, kMedian };

struct ImputerModel {
  std::vector<ImputeStrategy> strategy;
  std::vector<double> fill_values;

  bool operator==(const ImputerModel&) const = default;
};

enum class ScalerKind { kZScore, kMinMax };

inline constexpr double kSigmaFloor = 1e-12;

// For z-score, `first` holds means and `second` floored population stddevs;
// for min-max, `first` holds minima and `second` maxima.
struct ScalerModel {
  ScalerKind kind = ScalerKind::kZScore;
  std::vector<double> first;
  std::vector<double> second;

  std::size_t size() const { return first.size(); }
  bool operator==(const ScalerModel&) const = default;
};

ImputerModel fit_imputer(std::span<const NutrientProfile> profiles, const Schema& schema, ImputeStrategy strategy);
ImputerModel fit_imputer(std::span<const NutrientProfile> profiles, const Schema& schema,
                         std::span<const ImputeStrategy> per_feature);

std::vector<NutrientProfile> impute(std::span<const NutrientProfile> profiles, const ImputerModel& imputer);
NutrientProfile impute(const NutrientProfile& profile, const ImputerModel& imputer);

ScalerModel fit_scaler(std::span<const NutrientProfile> profiles, ScalerKind kind);

Matrix transform(std::span<const NutrientProfile> profiles, const ScalerModel& scaler);
std::vector<double> transform(const NutrientProfile& profile, const ScalerModel& scaler);

// Z-score only.
Matrix inverse_transform(const Matrix& features, const ScalerModel& scaler);

}  // namespace agro
