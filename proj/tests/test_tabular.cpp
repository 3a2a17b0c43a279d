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
#include <cmath>

#include "agrosense/rng.hpp"
#include "agrosense/tabular.hpp"
#include "support.hpp"

using namespace agro;
using agro::test::error_code_of;
using doctest::Approx;

namespace {

Schema one_feature() { return {{"x", ""}}; }

NutrientProfile row(double v, bool missing = false) {
  NutrientProfile p({v});
  p.missing[0] = missing;
  return p;
}

}  // namespace

TEST_CASE("mean imputation ignores missing entries") {
  const std::vector<NutrientProfile> rows = {row(1), row(2), row(0, true), row(3)};
  const auto imp = fit_imputer(rows, one_feature(), ImputeStrategy::kMean);
  CHECK(imp.fill_values[0] == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("median imputation") {
  const std::vector<NutrientProfile> odd = {row(1), row(2), row(0, true), row(100)};
  CHECK(fit_imputer(odd, one_feature(), ImputeStrategy::kMedian).fill_values[0] == 2.0);
  const std::vector<NutrientProfile> even = {row(1), row(2), row(10), row(100)};
  CHECK(fit_imputer(even, one_feature(), ImputeStrategy::kMedian).fill_values[0] == 6.0);
}

TEST_CASE("all-missing feature is unimputable") {
  const std::vector<NutrientProfile> rows = {row(0, true), row(0, true)};
  CHECK(error_code_of([&] { fit_imputer(rows, one_feature(), ImputeStrategy::kMean); }) ==
        ErrorCode::kUnimputableFeature);
}

TEST_CASE("impute fills only missing entries") {
  const Schema schema = {{"a", ""}, {"b", ""}};
  NutrientProfile p({1.0, 0.0});
  p.missing[1] = true;
  ImputerModel imp{{ImputeStrategy::kMean, ImputeStrategy::kMean}, {5.0, 2.0}};
  const auto out = impute(p, imp);
  CHECK(out.values == std::vector<double>{1.0, 2.0});
  CHECK_FALSE(out.has_missing());
  const NutrientProfile full({3.0, 4.0});
  CHECK(impute(full, imp) == full);
}

TEST_CASE("impute rejects a schema mismatch") {
  std::vector<NutrientProfile> rows;
  for (int i = 0; i < 3; ++i) rows.emplace_back(std::vector<double>{1, 2, 3, 6.5, 20, 50, 100});
  const auto imp = fit_imputer(rows, default_schema(), ImputeStrategy::kMean);
  const NutrientProfile six({1, 2, 3, 6.5, 20, 50});
  CHECK(error_code_of([&] { impute(six, imp); }) == ErrorCode::kSchema);
}

TEST_CASE("zscore scaler uses population sigma") {
  const std::vector<NutrientProfile> rows = {row(2), row(4), row(6)};
  const auto sc = fit_scaler(rows, ScalerKind::kZScore);
  CHECK(sc.first[0] == Approx(4.0).epsilon(1e-15));
  const double sigma = std::sqrt(8.0 / 3.0);
  CHECK(sc.second[0] == Approx(sigma).epsilon(1e-14));
  const auto m = transform(rows, sc);
  CHECK(m(0, 0) == Approx(-2.0 / sigma).epsilon(1e-14));
  CHECK(m(1, 0) == 0.0);
  CHECK(m(2, 0) == Approx(2.0 / sigma).epsilon(1e-14));
}

TEST_CASE("constant column is floored and maps to zero") {
  const std::vector<NutrientProfile> rows = {row(5), row(5), row(5)};
  const auto sc = fit_scaler(rows, ScalerKind::kZScore);
  CHECK(sc.second[0] == kSigmaFloor);
  CHECK(transform(row(5), sc)[0] == 0.0);
  const auto mm = fit_scaler(rows, ScalerKind::kMinMax);
  CHECK(transform(row(5), mm)[0] == 0.0);
}

TEST_CASE("minmax scaling clamps at inference") {
  const std::vector<NutrientProfile> rows = {row(0), row(5), row(10)};
  const auto sc = fit_scaler(rows, ScalerKind::kMinMax);
  CHECK(sc.first[0] == 0.0);
  CHECK(sc.second[0] == 10.0);
  const auto m = transform(rows, sc);
  CHECK(m.data == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(transform(row(12), sc)[0] == 1.0);
  CHECK(transform(row(-3), sc)[0] == 0.0);
}

TEST_CASE("zscore leaves out-of-range inference values unclamped") {
  const std::vector<NutrientProfile> rows = {row(0), row(10)};
  const auto sc = fit_scaler(rows, ScalerKind::kZScore);
  CHECK(transform(row(20), sc)[0] == Approx(3.0));
}

TEST_CASE("scaler errors") {
  CHECK(error_code_of([] { fit_scaler(std::vector<NutrientProfile>{}, ScalerKind::kZScore); }) ==
        ErrorCode::kEmptyDataset);
  const std::vector<NutrientProfile> rows = {row(1), row(2)};
  const auto sc = fit_scaler(rows, ScalerKind::kZScore);
  CHECK(error_code_of([&] { transform(NutrientProfile({1.0, 2.0}), sc); }) == ErrorCode::kSchema);
}

TEST_CASE("property: standardized fitting set has zero mean and unit std, and inverts") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(100), d = 1 + rng.below(7);
    std::vector<NutrientProfile> rows;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(j));
      rows.emplace_back(std::move(v));
    }
    const auto sc = fit_scaler(rows, ScalerKind::kZScore);
    const auto m = transform(rows, sc);
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0, ss = 0;
      for (std::size_t i = 0; i < n; ++i) s += m(i, j);
      const double mean = s / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) ss += (m(i, j) - mean) * (m(i, j) - mean);
      CHECK(std::abs(mean) < 1e-9);
      CHECK(std::abs(std::sqrt(ss / static_cast<double>(n)) - 1.0) < 1e-9);
    }
    const auto back = inverse_transform(m, sc);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(back(i, j) - rows[i].values[j]) < 1e-9);
    }
  }
}

TEST_CASE("property: imputation never changes present values") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    std::vector<NutrientProfile> rows;
    for (std::size_t i = 0; i < n; ++i) {
      NutrientProfile p({rng.uniform(), rng.uniform()});
      if (i > 0) p.missing[rng.below(2)] = rng.uniform() < 0.3;
      rows.push_back(p);
    }
    const Schema schema = {{"a", ""}, {"b", ""}};
    const auto imp = fit_imputer(rows, schema, trial % 2 ? ImputeStrategy::kMean : ImputeStrategy::kMedian);
    const auto out = impute(rows, imp);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK_FALSE(out[i].has_missing());
      for (std::size_t j = 0; j < 2; ++j) {
        if (!rows[i].missing[j]) CHECK(out[i].values[j] == rows[i].values[j]);
        else CHECK(out[i].values[j] == imp.fill_values[j]);
      }
    }
  }
}
