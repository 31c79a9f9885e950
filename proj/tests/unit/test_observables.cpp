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

#include <selfrepel/observables.hpp>
#include <selfrepel/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace selfrepel {
namespace {

TEST(EffectiveRadius, SinglePointAndLinearField) {
  const std::vector<double> one{0.3, -1.2};
  EXPECT_EQ(point_set_diameter(one, 2), 0.0);
  for (int d = 1; d <= 3; ++d) {
    const LatticeBox box(3, d);
    EXPECT_NEAR(effective_radius(linear_field(box, 0.5)), 0.5 * 6 * std::sqrt(d), 1e-12);
  }
}

TEST(EffectiveRadius, ReducedEqualsBruteForce) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> count(2, 500);
  for (int rep = 0; rep < 50; ++rep) {
    const int dim = 2 + rep % 2;
    const int n = count(gen);
    std::vector<double> points(static_cast<std::size_t>(n * dim));
    std::normal_distribution<double> normal(0.0, 1.0 + rep);
    for (auto& x : points) {
      x = normal(gen);
    }
    if (rep % 5 == 0) {
      // Collinear and duplicated points stress the hull.
      for (int s = 0; s < n; ++s) {
        points[static_cast<std::size_t>(s * dim + 1)] = points[static_cast<std::size_t>(s * dim)];
      }
      points[0] = points[static_cast<std::size_t>(dim)];
    }
    const double brute = point_set_diameter(points, dim, RadiusMethod::kBruteForce);
    const double reduced = point_set_diameter(points, dim, RadiusMethod::kReduced);
    EXPECT_EQ(brute, reduced) << "rep " << rep;
  }
}

TEST(EffectiveRadius, BoundedByComponentRanges) {
  std::mt19937_64 gen(5);
  const LatticeBox box(4, 2);
  std::normal_distribution<double> normal;
  std::vector<ScalarField> comps(2, ScalarField(static_cast<Eigen::Index>(box.site_count())));
  for (auto& c : comps) {
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      c[i] = normal(gen);
    }
  }
  const FieldConfig field(box, comps);
  const double r = effective_radius(field);
  double widest = 0.0;
  for (const auto& c : comps) {
    widest = std::max(widest, c.maxCoeff() - c.minCoeff());
  }
  EXPECT_GE(r, widest);
  EXPECT_LE(r, std::sqrt(2.0) * widest);
}

TEST(Jensen, ConstantFieldHolds) {
  const LatticeBox box(4, 2);
  const auto check = penalty_jensen_check(FieldConfig(box, 2), 0.5);
  EXPECT_TRUE(check.applicable);
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.lhs, 81.0 * 81.0);
  EXPECT_DOUBLE_EQ(check.rhs, 256.0);
}

TEST(Jensen, DilatedLinearFieldHolds) {
  const LatticeBox box(4, 2);
  const double eps = 0.5;
  const auto check = penalty_jensen_check(linear_field(box, eps / 4.0), eps);
  EXPECT_TRUE(check.applicable);
  EXPECT_TRUE(check.holds);
  EXPECT_GE(check.lhs, check.rhs);
}

TEST(Jensen, WideFieldIsNotApplicable) {
  const LatticeBox box(4, 2);
  const auto check = penalty_jensen_check(linear_field(box, 1.0), 0.5);
  EXPECT_FALSE(check.applicable);
  EXPECT_FALSE(check.holds);
}

TEST(Variance, SpectralAndLinearSolveAgree) {
  const LatticeBox path(1, 1);
  const GibbsParams params(1.0, 0.0);
  const auto basis = eigendecompose(path);
  const double solve = variance_pair(path, params, 0, 1).variance;
  const double spectral = variance_pair_spectral(basis, params, 0, 1);
  EXPECT_NEAR(solve, spectral, 1e-10);
  // Effective resistance of one edge of a 3-site path is 1, so the variance is 1 / (2 beta).
  EXPECT_NEAR(solve, 0.5, 1e-12);

  const LatticeBox box(3, 2);
  const auto basis2 = eigendecompose(box);
  const PairVarianceSolver solver(box);
  for (SiteIndex z = 0; z < box.site_count(); z += 7) {
    for (SiteIndex w = z + 1; w < box.site_count(); w += 5) {
      EXPECT_NEAR(solver.variance(params, z, w).variance, variance_pair_spectral(basis2, params, z, w), 1e-10);
    }
  }
}

TEST(Variance, SymmetryBetaScalingAndErrors) {
  const LatticeBox box(4, 2);
  const auto a = variance_pair(box, GibbsParams(1.0, 0.0), 3, 70);
  const auto b = variance_pair(box, GibbsParams(1.0, 0.0), 70, 3);
  const auto c = variance_pair(box, GibbsParams(2.0, 0.0), 3, 70);
  EXPECT_NEAR(a.variance, b.variance, 1e-12);
  EXPECT_NEAR(c.variance, a.variance / 2.0, 1e-12);
  EXPECT_EQ(a.per_component.size(), 2u);
  EXPECT_NEAR(a.total, 2.0 * a.variance, 1e-12);
  EXPECT_GT(a.variance, 0.0);
  EXPECT_THROW((void)variance_pair(box, GibbsParams(1.0, 0.0), 5, 5), std::invalid_argument);
}

TEST(VarianceScan, ExhaustiveMatchesPairwise) {
  const LatticeBox box(2, 2);
  const GibbsParams params(1.0, 0.0);
  const auto scan = variance_bounds_scan(box, params);
  EXPECT_TRUE(scan.exhaustive);
  EXPECT_EQ(scan.pairs_examined, box.site_count() * (box.site_count() - 1) / 2);
  double lo = 1e300;
  double hi = 0.0;
  const PairVarianceSolver solver(box);
  for (SiteIndex z = 0; z < box.site_count(); ++z) {
    for (SiteIndex w = z + 1; w < box.site_count(); ++w) {
      const double v = solver.variance(params, z, w).variance;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  EXPECT_NEAR(scan.min_variance, lo, 1e-10);
  EXPECT_NEAR(scan.max_variance, hi, 1e-10);
  EXPECT_NEAR(solver.variance(params, scan.argmax.first, scan.argmax.second).variance, hi, 1e-10);
}

TEST(VarianceScan, SubsampleIsDeterministic) {
  const LatticeBox box(5, 2);
  const auto a = variance_bounds_scan(box, GibbsParams(1.0, 0.0), 10);
  const auto b = variance_bounds_scan(box, GibbsParams(1.0, 0.0), 10);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.max_variance, b.max_variance);
  EXPECT_EQ(a.argmin, b.argmin);
  const auto full = variance_bounds_scan(box, GibbsParams(1.0, 0.0));
  EXPECT_NEAR(a.max_variance, full.max_variance, 1e-10);
}

TEST(ReflectedWalk, Limits) {
  const ReflectedWalk walk(6);
  EXPECT_NEAR(walk.return_probability(0, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(walk.return_probability(6, 1e-9), 1.0, 1e-8);
  const double late = 50.0 * 36.0 * std::log(6.0);
  EXPECT_NEAR(walk.return_probability(0, late), 1.0 / 13.0, 1e-8);
  EXPECT_NEAR(walk.max_return_probability(late), 1.0 / 13.0, 1e-8);
}

TEST(ReflectedWalk, TwoSiteClosedForm) {
  // On {-1, 0, 1} the generator is the path Laplacian with spectrum {0, 1, 3}.
  const ReflectedWalk walk(1);
  const double t = 0.7;
  const double center = 1.0 / 3.0 + 2.0 / 3.0 * std::exp(-3.0 * t);
  const double end = 1.0 / 3.0 + 0.5 * std::exp(-t) + 1.0 / 6.0 * std::exp(-3.0 * t);
  EXPECT_NEAR(walk.return_probability(0, t), center, 1e-12);
  EXPECT_NEAR(walk.return_probability(1, t), end, 1e-12);
  EXPECT_NEAR(walk.return_probability(-1, t), end, 1e-12);
}

TEST(Semigroup, DecayExponent) {
  const auto decay = semigroup_decay(32);
  EXPECT_GE(decay.slope, -0.6);
  EXPECT_LE(decay.slope, -0.4);
  EXPECT_LT(decay.late_time_gap, 1e-8);
  EXPECT_GT(decay.sqrt_t_constant, 0.0);
}

TEST(Semigroup, CsvRows) {
  const auto rows = semigroup_diagnostics(4, log_time_grid(0.1, 10.0, 5));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_NEAR(rows.front().t, 0.1, 1e-12);
  EXPECT_NEAR(rows.back().t, 10.0, 1e-12);
  for (const auto& row : rows) {
    EXPECT_GE(row.supremum, row.center);
    EXPECT_GE(row.supremum, row.boundary);
  }
  std::ostringstream out;
  write_semigroup_csv(rows, out);
  EXPECT_EQ(out.str().rfind("N,t,return_prob,return_prob_center,return_prob_boundary\n", 0), 0u);
}

}  // namespace
}  // namespace selfrepel
