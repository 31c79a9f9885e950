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
#include <selfrepel/penalty.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace selfrepel {
namespace {

TEST(BoxOverlap, Values) {
  const double p[2] = {0.0, 0.0};
  const double q[2] = {0.5, 0.5};
  const double r[2] = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(box_overlap(p, q, 2), 0.25);
  EXPECT_DOUBLE_EQ(box_overlap(p, p, 2), 1.0);
  EXPECT_DOUBLE_EQ(box_overlap(p, r, 2), 0.0);
}

TEST(Penalty, TwoPointExample) {
  const std::vector<double> points{0.0, 0.0, 0.5, 0.5};
  const auto result = penalty_from_positions(points, 2);
  EXPECT_DOUBLE_EQ(result.total, 2.5);
  EXPECT_DOUBLE_EQ(result.diagonal, 2.0);
  EXPECT_DOUBLE_EQ(result.off_diagonal, 0.5);
  EXPECT_EQ(result.overlapping_pairs, 1u);
  EXPECT_NEAR(penalty_grid_integral(points, 2, 1e-3), 2.5, 1e-3);
}

TEST(Penalty, SeparatedPoints) {
  const std::vector<double> points{0.0, 0.0, 1.0, 0.2};
  EXPECT_DOUBLE_EQ(penalty_from_positions(points, 2).total, 2.0);
}

TEST(Penalty, CoincidentPoints) {
  const LatticeBox box(2, 2);
  const FieldConfig zero(box, 2);
  const auto n = static_cast<double>(box.site_count());
  EXPECT_EQ(penalty_integral(zero).total, n * n);
  EXPECT_EQ(penalty_integral_naive(zero).total, n * n);
}

TEST(Penalty, MatchesGridIntegrationOnAlignedValues) {
  std::mt19937_64 gen(19);
  const double h = 1e-3;
  for (int rep = 0; rep < 8; ++rep) {
    const int dim = 1 + rep % 2;
    std::uniform_int_distribution<int> ticks(-1500, 1500);
    std::vector<double> points(static_cast<std::size_t>(40 * dim));
    for (auto& x : points) {
      x = ticks(gen) * h;
    }
    EXPECT_NEAR(penalty_grid_integral(points, dim, h), penalty_from_positions(points, dim).total, 1e-9);
  }
}

TEST(Penalty, MatchesGridIntegration) {
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 6; ++rep) {
    const int dim = 1 + rep % 2;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> points(static_cast<std::size_t>(12 * dim));
    for (auto& x : points) {
      x = u(gen);
    }
    const double exact = penalty_from_positions(points, dim).total;
    EXPECT_NEAR(penalty_grid_integral(points, dim, 1e-3), exact, 1e-3 * 12) << "rep " << rep;
  }
}

TEST(Penalty, HashedEqualsNaiveBitForBit) {
  std::mt19937_64 gen(23);
  for (int d = 1; d <= 3; ++d) {
    const LatticeBox box(3, d);
    for (double spread : {0.3, 1.0, 3.0, 40.0}) {
      std::normal_distribution<double> normal(0.0, spread);
      std::vector<ScalarField> comps;
      for (int i = 0; i < d; ++i) {
        ScalarField f(static_cast<Eigen::Index>(box.site_count()));
        for (Eigen::Index k = 0; k < f.size(); ++k) {
          f[k] = normal(gen);
        }
        comps.push_back(f);
      }
      const FieldConfig field(box, comps);
      const auto naive = penalty_integral_naive(field);
      const auto hashed = penalty_integral(field);
      const auto cells = penalty_from_positions(field.packed(), d, false);
      EXPECT_EQ(hashed.total, naive.total);
      EXPECT_EQ(cells.total, naive.total);
      EXPECT_EQ(hashed.overlapping_pairs, naive.overlapping_pairs);
      EXPECT_GE(hashed.total, static_cast<double>(box.site_count()));
    }
  }
}

TEST(Penalty, TotalEqualsSiteCountOnlyWhenSeparated) {
  const LatticeBox box(3, 2);
  EXPECT_EQ(penalty_integral(linear_field(box, 1.0)).total, static_cast<double>(box.site_count()));
  EXPECT_GT(penalty_integral(linear_field(box, 0.99)).total, static_cast<double>(box.site_count()));
}

TEST(CellList, NeighborhoodCoversNearPoints) {
  CellList cells(2);
  const std::vector<double> points{0.1, 0.1, 0.9, 0.95, 1.8, -0.2, 5.0, 5.0};
  cells.build(points);
  const double probe[2] = {0.5, 0.5};
  std::vector<std::uint32_t> seen;
  cells.for_each_near(probe, [&](std::uint32_t id) { seen.push_back(id); });
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::uint32_t>{0, 1, 2}));
  const double moved[2] = {4.6, 4.6};
  cells.relocate(0, points.data(), moved);
  seen.clear();
  cells.for_each_near(moved, [&](std::uint32_t id) { seen.push_back(id); });
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::uint32_t>{0, 3}));
  EXPECT_THROW(CellList(5), std::invalid_argument);
}

}  // namespace
}  // namespace selfrepel
