// Copyright 2026 The selfrepel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <selfrepel/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace selfrepel {
namespace {

TEST(CounterRng, Deterministic) {
  CounterRng a(42, 3);
  CounterRng b(42, 3);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a(), b());
  }
}

TEST(CounterRng, StreamsDiffer) {
  CounterRng a(42, 0);
  CounterRng b(42, 1);
  CounterRng c(43, 0);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    same_ab += x == b() ? 1 : 0;
    same_ac += x == c() ? 1 : 0;
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(CounterRng, StateRoundTrip) {
  CounterRng a(9, 2);
  for (int i = 0; i < 37; ++i) {
    (void)a();
  }
  (void)a.normal();
  CounterRng b(a.state());
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(a(), b());
  }
}

TEST(CounterRng, UniformRangeAndMoments) {
  CounterRng rng(1, 0);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open_zero();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum_sq / n - mean * mean, 1.0 / 12.0, 0.002);
}

TEST(CounterRng, NormalMoments) {
  CounterRng rng(5, 7);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
    sum_4 += z * z * z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum_sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sum_4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(CounterRng, BelowIsUnbiased) {
  CounterRng rng(11, 0);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (const int c : counts) {
    EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
  }
}

TEST(CounterRng, SplitMatchesFreshStream) {
  const CounterRng base(3, 0);
  CounterRng split = base.split(4);
  CounterRng fresh(3, 4);
  for (int i = 0; i < 50; ++i) {
    ASSERT_EQ(split(), fresh());
  }
}

}  // namespace
}  // namespace selfrepel
