/*
 * Copyright 2026 The genremem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>

namespace genremem::stats {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double degrees_of_freedom = 0.0;
  double mean_difference = 0.0;
  std::size_t n = 0;
  /// Zero variance (differences equal up to input rounding): t is undefined,
  /// p is reported as 1 and the test is never significant.
  bool degenerate = false;
  bool significant = false;
};

/// Two-tailed paired t-test on a[i] - b[i]. Requires equal lengths >= 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                          double alpha = 0.001);

/// Two-tailed Welch (unequal variance) t-test for independent samples.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha = 0.001);

/// Compensated (Neumaier) sum in the order given.
double stable_sum(std::span<const double> values);

}  // namespace genremem::stats
