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

#include <selfrepel/spectral.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace selfrepel {
namespace {

std::vector<double> sorted_spectrum(const SpectralBasis& basis) {
  std::vector<double> values(basis.eigenvalues().data(), basis.eigenvalues().data() + basis.size());
  std::sort(values.begin(), values.end());
  return values;
}

TEST(Eigendecompose, PathGraphSpectrum) {
  const auto basis = eigendecompose(LatticeBox(1, 1));
  const auto values = sorted_spectrum(basis);
  ASSERT_EQ(values.size(), 3u);
  EXPECT_NEAR(values[0], 0.0, 1e-12);
  EXPECT_NEAR(values[1], 1.0, 1e-12);
  EXPECT_NEAR(values[2], 3.0, 1e-12);
}

TEST(Eigendecompose, SquareSpectrumIsSumset) {
  const auto basis = eigendecompose(LatticeBox(1, 2));
  const auto values = sorted_spectrum(basis);
  const std::vector<double> expected{0, 1, 1, 2, 3, 3, 4, 4, 6};
  ASSERT_EQ(values.size(), expected.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_NEAR(values[i], expected[i], 1e-12);
  }
}

TEST(Eigendecompose, TensorSumAcrossDimensions) {
  for (int N = 1; N <= 4; ++N) {
    const auto one = sorted_spectrum(eigendecompose(LatticeBox(N, 1)));
    for (int d = 2; d <= 3; ++d) {
      if (d == 3 && N > 3) {
        continue;
      }
      const auto values = sorted_spectrum(eigendecompose(LatticeBox(N, d)));
      const auto expected = tensor_sum_spectrum(one, d);
      ASSERT_EQ(values.size(), expected.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        EXPECT_NEAR(values[i], expected[i], 1e-9);
      }
    }
  }
}

TEST(Eigendecompose, OrthonormalAndExact) {
  for (int d = 1; d <= 2; ++d) {
    for (int N : {1, 2, 5, 8}) {
      const auto basis = eigendecompose(LatticeBox(N, d));
      EXPECT_LT(basis.gram_deviation(), 1e-9);
      EXPECT_LT(basis.max_residual(), 1e-8);
    }
  }
}

TEST(Eigendecompose, ConstantMode) {
  const LatticeBox box(3, 2);
  const auto basis = eigendecompose(box);
  EXPECT_NEAR(basis.eigenvalues()[basis.constant_mode()], 0.0, 1e-12);
  const double expected = 1.0 / std::sqrt(static_cast<double>(box.site_count()));
  const auto column = basis.eigenvectors().col(basis.constant_mode());
  EXPECT_NEAR((column.array() - expected).abs().maxCoeff(), 0.0, 1e-12);
  EXPECT_GT(basis.eigenvalues()[1], 1e-3);
}

TEST(Eigendecompose, FaultInjectionBreaksResidual) {
  auto basis = eigendecompose(LatticeBox(3, 2));
  ASSERT_LT(basis.max_residual(), 1e-8);
  basis.perturb_eigenvalue(5, 1e-3);
  EXPECT_GT(basis.max_residual(), 1e-8);
}

TEST(Eigendecompose, RejectsBadOperators) {
  const LatticeBox box(1, 1);
  Eigen::MatrixXd asym = -laplacian_matrix(box);
  asym(0, 1) += 0.5;
  EXPECT_THROW(SpectralBasis(box, asym), std::invalid_argument);
  EXPECT_THROW(SpectralBasis(box, Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(eigendecompose(LatticeBox(4, 3), 100), std::length_error);
}

TEST(Eigendecompose, SeparableMatchesDense) {
  for (int d = 1; d <= 3; ++d) {
    const LatticeBox box(d == 3 ? 2 : 4, d);
    const auto dense = eigendecompose(box);
    const auto separable = eigendecompose_separable(box);
    EXPECT_LT(separable.gram_deviation(), 1e-9);
    EXPECT_LT(separable.max_residual(), 1e-8);
    EXPECT_LT((dense.eigenvalues() - separable.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9);
    const auto n = dense.size();
    auto green = [n](const SpectralBasis& b) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index k = 1; k < n; ++k) {
        g += b.eigenvectors().col(k) * b.eigenvectors().col(k).transpose() / b.eigenvalues()[k];
      }
      return g;
    };
    EXPECT_LT((green(dense) - green(separable)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GT(separable.eigenvectors().col(0).minCoeff(), 0.0);
  }
}

TEST(SinusoidBasis, UnitNormAndConstant) {
  for (int N : {1, 2, 8, 20}) {
    const auto modes = sinusoid_basis_1d(N);
    ASSERT_EQ(modes.size(), static_cast<std::size_t>(2 * N + 1));
    for (const auto& mode : modes) {
      EXPECT_NEAR(mode.values.squaredNorm(), 1.0, 1e-10) << "N=" << N << " k=" << mode.index;
    }
    const auto& constant = modes[static_cast<std::size_t>(N)];
    EXPECT_EQ(constant.index, 0);
    EXPECT_NEAR(constant.values[0], 1.0 / std::sqrt(2.0 * N + 1.0), 1e-15);
    EXPECT_EQ(constant.residual, 0.0);
  }
}

TEST(SinusoidBasis, ClosedFormsAreEigenvectorsWithShiftedEigenvalues) {
  const int N = 8;
  const auto modes = sinusoid_basis_1d(N);
  const auto basis = eigendecompose(LatticeBox(N, 1));
  const auto truth = sorted_spectrum(basis);
  for (const auto& mode : modes) {
    if (mode.index == 0) {
      continue;
    }
    double gap = 1e300;
    for (const double value : truth) {
      gap = std::min(gap, std::abs(value - mode.exact_eigenvalue));
    }
    EXPECT_LT(gap, 1e-9) << "k=" << mode.index;
    if (std::abs(mode.index) <= 2) {
      EXPECT_LT(std::abs(mode.claimed_eigenvalue - mode.exact_eigenvalue) / mode.exact_eigenvalue, 0.05);
    }
    EXPECT_NEAR(mode.residual, std::abs(mode.claimed_eigenvalue - mode.exact_eigenvalue), 1e-9);
  }
  const auto& first_sine = modes[static_cast<std::size_t>(N + 1)];
  const double theta = std::numbers::pi / (2.0 * N + 1.0);
  EXPECT_NEAR(first_sine.exact_eigenvalue, 4.0 * std::pow(std::sin(theta / 2.0), 2), 1e-12);
}

TEST(AlphaCoefficients, CosineModesVanish) {
  for (int d = 1; d <= 3; ++d) {
    const auto alpha = alpha_coefficients(7, d);
    for (int k = 1; k <= 7; ++k) {
      EXPECT_EQ(alpha.alpha(-k), 0.0);
    }
  }
}

TEST(AlphaCoefficients, ReconstructIdentity) {
  for (int d = 1; d <= 3; ++d) {
    for (int N : {1, 4, 16, 33}) {
      const auto alpha = alpha_coefficients(N, d);
      for (int n = -N; n <= N; ++n) {
        EXPECT_NEAR(alpha.reconstruct(n), n, 1e-8);
      }
    }
  }
}

TEST(AlphaCoefficients, ClosedFormMatchesSum) {
  for (int d = 1; d <= 3; ++d) {
    for (int N : {3, 10, 32}) {
      const auto alpha = alpha_coefficients(N, d);
      for (int k = 1; k <= N; ++k) {
        const double closed = alpha_closed_form(N, d, k);
        EXPECT_NEAR(alpha.alpha(k), closed, 1e-8 * std::max(1.0, std::abs(closed)));
      }
    }
  }
}

TEST(AlphaCoefficients, BoundIsStableAcrossN) {
  const int d = 2;
  std::vector<double> ratios;
  for (int N : {4, 8, 16, 32}) {
    const auto alpha = alpha_coefficients(N, d);
    double worst = 0.0;
    for (int k = 1; k <= N; ++k) {
      worst = std::max(worst, std::abs(alpha.alpha(k)) * k * k / std::pow(N, (d + 2) / 2.0));
    }
    ratios.push_back(worst);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LT(*hi / *lo, 1.25);
}

TEST(DriftEnergy, ScalingAndBoundedness) {
  EXPECT_EQ(drift_energy_check(8, 2, 0.0), 0.0);
  EXPECT_NEAR(drift_energy_check(8, 2, 2.0), 4.0 * drift_energy_check(8, 2, 1.0), 1e-9);
  std::vector<double> ratios;
  for (int N : {4, 8, 16, 32, 64}) {
    ratios.push_back(drift_energy_check(N, 2, 1.0) / (2.0 * std::pow(N, 2)));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LT(*hi / *lo, 1.25);
}

TEST(SpectrumCsv, HeaderAndRows) {
  std::ostringstream out;
  write_spectrum_csv(eigendecompose(LatticeBox(1, 1)), out);
  const auto text = out.str();
  EXPECT_EQ(text.rfind("k,eigenvalue\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

}  // namespace
}  // namespace selfrepel
