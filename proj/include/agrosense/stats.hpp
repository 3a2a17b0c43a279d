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

namespace agro {

// I_x(a, b) by Lentz's continued fraction, accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);
double student_t_two_sided_p(double t, double df);
// P(F > f) for F(d1, d2).
double f_survival(double f, double d1, double d2);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Zero-variance differences: zero mean gives t = 0, p = 1; nonzero mean
// gives p = 0 and t = +-inf.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
};

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

}  // namespace agro
