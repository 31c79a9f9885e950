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

#include <selfrepel/free_field.hpp>
#include <selfrepel/observables.hpp>
#include <selfrepel/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace selfrepel {
namespace {

TEST(FreeField, ComponentsAreZeroMean) {
  const auto basis = eigendecompose(LatticeBox(4, 2));
  CounterRng rng(1, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto field = sample_free_field(basis, GibbsParams(1.0, 0.0), rng);
    ASSERT_EQ(field.component_count(), 2);
    for (int i = 0; i < 2; ++i) {
      EXPECT_LT(std::abs(field.component(i).sum()), 1e-12);
    }
  }
}

TEST(FreeField, CoefficientVariance) {
  const auto basis = eigendecompose(LatticeBox(2, 2));
  const GibbsParams params(1.5, 0.0);
  const FreeFieldSampler sampler(basis, params);
  CounterRng rng(2, 0);
  const int draws = 20000;
  const Eigen::Index n = basis.size();
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd coeffs;
  for (int r = 0; r < draws; ++r) {
    (void)sampler.sample(rng, coeffs);
    sum_sq += coeffs.col(0).cwiseAbs2();
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    const double expected = 1.0 / (2.0 * params.beta() * basis.eigenvalues()[k]);
    const double se = expected * std::sqrt(2.0 / draws);
    EXPECT_NEAR(sum_sq[k] / draws, expected, 4.0 * se) << "mode " << k;
    EXPECT_NEAR(sampler.coefficient_sd(k), std::sqrt(expected), 1e-14);
  }
}

TEST(FreeField, PairVarianceMatchesOracle) {
  const LatticeBox box(3, 2);
  const auto basis = eigendecompose(box);
  const GibbsParams params(1.0, 0.0);
  CounterRng rng(3, 0);
  const std::vector<std::pair<SiteIndex, SiteIndex>> pairs{{0, 1}, {0, 48}, {24, 25}, {10, 40}};
  const int draws = 20000;
  std::vector<double> sum_sq(pairs.size(), 0.0);
  const FreeFieldSampler sampler(basis, params);
  for (int r = 0; r < draws; ++r) {
    const auto field = sampler.sample(rng);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double diff = field.value(pairs[p].first, 1) - field.value(pairs[p].second, 1);
      sum_sq[p] += diff * diff;
    }
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double exact = variance_pair(box, params, pairs[p].first, pairs[p].second).variance;
    EXPECT_NEAR(sum_sq[p] / draws, exact, 4.0 * exact * std::sqrt(2.0 / draws));
  }
}

TEST(FreeField, DeterministicGivenStream) {
  const auto basis = eigendecompose(LatticeBox(2, 2));
  CounterRng a(5, 1);
  CounterRng b(5, 1);
  const auto fa = sample_free_field(basis, GibbsParams(1.0, 0.0), a);
  const auto fb = sample_free_field(basis, GibbsParams(1.0, 0.0), b);
  EXPECT_EQ(fa.packed(), fb.packed());
}

TEST(DriftedField, ZeroDriftIsFreeField) {
  const auto basis = eigendecompose(LatticeBox(3, 2));
  CounterRng a(8, 0);
  CounterRng b(8, 0);
  const auto free = sample_free_field(basis, GibbsParams(1.0, 0.0), a);
  const auto drifted = sample_drifted_field(basis, GibbsParams(1.0, 0.0), 0.0, b);
  EXPECT_EQ(free.packed(), drifted.packed());
}

TEST(DriftedField, MeanDifferenceFollowsDrift) {
  const LatticeBox box(3, 2);
  const auto basis = eigendecompose(box);
  const double a = 0.8;
  CounterRng rng(9, 0);
  const SiteIndex z = box.site(std::vector<int>{3, -1});
  const SiteIndex w = box.site(std::vector<int>{-2, 2});
  const int draws = 5000;
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (int r = 0; r < draws; ++r) {
    const auto field = sample_drifted_field(basis, GibbsParams(1.0, 0.0), a, rng);
    EXPECT_TRUE(field.is_centered());
    sum0 += field.value(z, 0) - field.value(w, 0);
    sum1 += field.value(z, 1) - field.value(w, 1);
  }
  const double sd = std::sqrt(variance_pair(box, GibbsParams(1.0, 0.0), z, w).variance / draws);
  EXPECT_NEAR(sum0 / draws, a * 5.0, 4.0 * sd);
  EXPECT_NEAR(sum1 / draws, a * -3.0, 4.0 * sd);
}

TEST(DriftedField, DriftAloneHasCornerDiameter) {
  const LatticeBox box(4, 2);
  const double a = 1.3;
  EXPECT_NEAR(effective_radius(linear_field(box, a)), 2.0 * 4 * a * std::sqrt(2.0), 1e-12);
}

TEST(FreeField, BetaScaling) {
  const auto basis = eigendecompose(LatticeBox(2, 2));
  const FreeFieldSampler one(basis, GibbsParams(1.0, 0.0));
  const FreeFieldSampler three(basis, GibbsParams(3.0, 0.0));
  for (Eigen::Index k = 1; k < basis.size(); ++k) {
    EXPECT_NEAR(std::pow(three.coefficient_sd(k), 2), std::pow(one.coefficient_sd(k), 2) / 3.0, 1e-14);
  }
}

}  // namespace
}  // namespace selfrepel
