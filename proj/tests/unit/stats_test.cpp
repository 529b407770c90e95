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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "genremem/error.hpp"
#include "oracles.hpp"

namespace genremem::stats {
namespace {

TEST(PairedT, IdenticalSamplesAreDegenerate) {
  const std::vector<double> a{0.1, 0.5, 0.3};
  const auto r = paired_t_test(a, a);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.significant);
  EXPECT_EQ(r.p, 1.0);
}

TEST(PairedT, ConstantShiftIsDegenerate) {
  const std::vector<double> a{0.1, 0.5, 0.3};
  const std::vector<double> b{0.2, 0.6, 0.4};
  const auto r = paired_t_test(a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.significant);
}

TEST(PairedT, ShiftWithTinyNoiseIsSignificant) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<double> a(100);
  std::vector<double> b(100);
  for (std::size_t i = 0; i < 100; ++i) {
    b[i] = 0.3 + noise(rng);
    a[i] = b[i] + 0.2 + noise(rng);
  }
  const auto r = paired_t_test(a, b, 0.001);
  EXPECT_FALSE(r.degenerate);
  EXPECT_TRUE(r.significant);
  EXPECT_LT(r.p, 1e-50);
  EXPECT_EQ(r.degrees_of_freedom, 99.0);
}

TEST(PairedT, FivePairsMatchTextbookFormula) {
  const std::vector<double> a{0.30, 0.25, 0.40, 0.35, 0.20};
  const std::vector<double> b{0.20, 0.25, 0.30, 0.20, 0.15};
  // d = (.1, 0, .1, .15, .05), mean .08, sum of squared deviations .013
  const double t = 0.08 / (std::sqrt(0.013 / 4.0) / std::sqrt(5.0));
  const auto r = paired_t_test(a, b);
  EXPECT_NEAR(r.t, t, 1e-9);
  EXPECT_NEAR(r.t, oracle::paired_t(a, b), 1e-9);
  EXPECT_NEAR(r.p, 0.03491970667453902, 1e-9);
  EXPECT_NEAR(r.mean_difference, 0.08, 1e-15);
  EXPECT_FALSE(r.significant);
  EXPECT_TRUE(paired_t_test(a, b, 0.05).significant);
}

TEST(PairedT, SignFollowsTheFirstSample) {
  const std::vector<double> a{0.30, 0.25, 0.40, 0.35, 0.20};
  const std::vector<double> b{0.20, 0.25, 0.30, 0.20, 0.15};
  const auto ab = paired_t_test(a, b);
  const auto ba = paired_t_test(b, a);
  EXPECT_NEAR(ab.t, -ba.t, 1e-12);
  EXPECT_NEAR(ab.p, ba.p, 1e-12);
}

TEST(PairedT, RejectsBadShapes) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(paired_t_test(one, one), Error);
  EXPECT_THROW(paired_t_test(two, one), Error);
}

TEST(WelchT, KnownValue) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2, 4, 6, 8, 10};
  // means 2.5 and 6, variances 5/3 and 10
  const double se = std::sqrt((5.0 / 3.0) / 4.0 + 10.0 / 5.0);
  const auto r = welch_t_test(a, b);
  EXPECT_NEAR(r.t, -3.5 / se, 1e-12);
  const double v1 = (5.0 / 3.0) / 4.0;
  const double v2 = 10.0 / 5.0;
  EXPECT_NEAR(r.degrees_of_freedom,
              (v1 + v2) * (v1 + v2) / (v1 * v1 / 3.0 + v2 * v2 / 4.0), 1e-12);
  EXPECT_NEAR(r.p, 0.06913359319239236, 1e-9);
}

TEST(WelchT, FlatSamplesAreDegenerate) {
  const std::vector<double> a{1, 1, 1};
  const std::vector<double> b{2, 2};
  EXPECT_TRUE(welch_t_test(a, b).degenerate);
}

TEST(StableSum, RecoversCancelledTerms) {
  const std::vector<double> v{1e100, 1.0, -1e100, 1.0};
  EXPECT_EQ(stable_sum(v), 2.0);
  std::vector<double> tenths(10, 0.1);
  EXPECT_EQ(stable_sum(tenths), 1.0);
}

}  // namespace
}  // namespace genremem::stats
