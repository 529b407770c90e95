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

#include "genremem/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "genremem/error.hpp"

namespace genremem::stats {
namespace {

double two_tailed_p(double t, double dof) {
  const boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::kUsage, "alpha must lie in (0, 1)");
}

}  // namespace

double stable_sum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                          double alpha) {
  check_alpha(alpha);
  if (a.size() != b.size()) fail(ErrorKind::kUsage, "paired t-test needs aligned samples");
  if (a.size() < 2) fail(ErrorKind::kUsage, "paired t-test needs at least 2 pairs");

  const auto n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
  const double mean = stable_sum(diff) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (diff[i] - mean) * (diff[i] - mean);
  const double var = stable_sum(sq) / static_cast<double>(n - 1);

  TTestResult r;
  r.n = n;
  r.mean_difference = mean;
  r.degrees_of_freedom = static_cast<double>(n - 1);
  // differences that agree up to rounding of the inputs count as constant
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
  const auto [lo, hi] = std::minmax_element(diff.begin(), diff.end());
  const bool constant = *hi - *lo <= 8.0 * std::numeric_limits<double>::epsilon() * scale;
  if (constant || !(var > 0.0)) {
    r.degenerate = true;
    r.t = 0.0;
    r.p = 1.0;
    return r;
  }
  r.t = mean / std::sqrt(var / static_cast<double>(n));
  r.p = two_tailed_p(r.t, r.degrees_of_freedom);
  r.significant = r.p < alpha;
  return r;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha) {
  check_alpha(alpha);
  if (a.size() < 2 || b.size() < 2) {
    fail(ErrorKind::kUsage, "Welch t-test needs at least 2 values per sample");
  }
  auto moments = [](std::span<const double> x) {
    const double mean = stable_sum(x) / static_cast<double>(x.size());
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    return std::pair{mean, stable_sum(sq) / static_cast<double>(x.size() - 1)};
  };
  const auto [mean_a, var_a] = moments(a);
  const auto [mean_b, var_b] = moments(b);
  const double se_a = var_a / static_cast<double>(a.size());
  const double se_b = var_b / static_cast<double>(b.size());

  TTestResult r;
  r.n = a.size() + b.size();
  r.mean_difference = mean_a - mean_b;
  auto flat = [](std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  };
  if ((flat(a) && flat(b)) || !(se_a + se_b > 0.0)) {
    r.degenerate = true;
    r.t = 0.0;
    r.p = 1.0;
    return r;
  }
  r.t = r.mean_difference / std::sqrt(se_a + se_b);
  r.degrees_of_freedom =
      (se_a + se_b) * (se_a + se_b) /
      (se_a * se_a / static_cast<double>(a.size() - 1) +
       se_b * se_b / static_cast<double>(b.size() - 1));
  r.p = two_tailed_p(r.t, r.degrees_of_freedom);
  r.significant = r.p < alpha;
  return r;
}

}  // namespace genremem::stats
