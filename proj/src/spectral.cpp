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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace selfrepel {

SpectralBasis::SpectralBasis(LatticeBox box, const Eigen::MatrixXd& negative_laplacian) : box_{std::move(box)} {
  const auto n = static_cast<Eigen::Index>(box_.site_count());
  if (negative_laplacian.rows() != n || negative_laplacian.cols() != n) {
    throw DimensionMismatch("SpectralBasis: operator shape does not match the box");
  }
  const double asym = (negative_laplacian - negative_laplacian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, negative_laplacian.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("SpectralBasis: operator is not symmetric (max asymmetry " + std::to_string(asym) +
                                ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(negative_laplacian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("SpectralBasis: eigensolver did not converge");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  if (std::abs(eigenvalues_[0]) > kZeroEigenvalueTolerance ||
      (n > 1 && eigenvalues_[1] <= kZeroEigenvalueTolerance)) {
    throw std::invalid_argument("SpectralBasis: operator must have exactly one zero eigenvalue");
  }
  if (eigenvectors_.col(0).sum() < 0.0) {
    eigenvectors_.col(0) *= -1.0;
  }
}

SpectralBasis::SpectralBasis(LatticeBox box, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors)
    : box_{std::move(box)}, eigenvalues_{std::move(eigenvalues)}, eigenvectors_{std::move(eigenvectors)} {
  const auto n = static_cast<Eigen::Index>(box_.site_count());
  if (eigenvalues_.size() != n || eigenvectors_.rows() != n || eigenvectors_.cols() != n) {
    throw DimensionMismatch("SpectralBasis: eigenpair shapes do not match the box");
  }
  if (std::abs(eigenvalues_[0]) > kZeroEigenvalueTolerance ||
      (n > 1 && eigenvalues_[1] <= kZeroEigenvalueTolerance)) {
    throw std::invalid_argument("SpectralBasis: operator must have exactly one zero eigenvalue");
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    if (eigenvalues_[k] < eigenvalues_[k - 1]) {
      throw std::invalid_argument("SpectralBasis: eigenvalues must be sorted ascending");
    }
  }
  if (eigenvectors_.col(0).sum() < 0.0) {
    eigenvectors_.col(0) *= -1.0;
  }
}

double SpectralBasis::gram_deviation() const {
  const Eigen::MatrixXd gram = eigenvectors_.transpose() * eigenvectors_;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double SpectralBasis::max_residual() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < size(); ++k) {
    const ScalarField phi = eigenvectors_.col(k);
    const ScalarField r = -apply_laplacian(phi, box_) - eigenvalues_[k] * phi;
    worst = std::max(worst, r.norm());
  }
  return worst;
}

SpectralBasis eigendecompose(const LatticeBox& box, std::size_t site_cap) {
  return SpectralBasis(box, -laplacian_matrix(box, site_cap));
}

SpectralBasis eigendecompose_separable(const LatticeBox& box, std::size_t site_cap) {
  const std::size_t n = box.site_count();
  if (n > site_cap) {
    throw std::length_error("eigendecompose_separable: " + std::to_string(n) + " sites exceeds the dense cap of " +
                            std::to_string(site_cap));
  }
  const LatticeBox line(box.half_width(), 1);
  const SpectralBasis one(line, -laplacian_matrix(line));
  const int m = line.side();
  const int d = box.dimension();

  struct Mode {
    double value;
    std::size_t index;
  };
  std::vector<Mode> modes(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat;
    double value = 0.0;
    for (int axis = d - 1; axis >= 0; --axis) {
      value += one.eigenvalues()[static_cast<Eigen::Index>(rest % static_cast<std::size_t>(m))];
      rest /= static_cast<std::size_t>(m);
    }
    modes[flat] = {value, flat};
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.value < b.value; });

  Eigen::VectorXd values(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> axis_mode(static_cast<std::size_t>(d));
  for (std::size_t col = 0; col < n; ++col) {
    values[static_cast<Eigen::Index>(col)] = modes[col].value;
    std::size_t rest = modes[col].index;
    for (int axis = d - 1; axis >= 0; --axis) {
      axis_mode[static_cast<std::size_t>(axis)] = rest % static_cast<std::size_t>(m);
      rest /= static_cast<std::size_t>(m);
    }
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t site_rest = s;
      double v = 1.0;
      for (int axis = d - 1; axis >= 0; --axis) {
        const auto c = static_cast<Eigen::Index>(site_rest % static_cast<std::size_t>(m));
        site_rest /= static_cast<std::size_t>(m);
        v *= one.eigenvectors()(c, static_cast<Eigen::Index>(axis_mode[static_cast<std::size_t>(axis)]));
      }
      vectors(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(col)) = v;
    }
  }
  return SpectralBasis(box, std::move(values), std::move(vectors));
}

std::vector<double> tensor_sum_spectrum(const std::vector<double>& one_dim, int d) {
  if (d < 1) {
    throw std::invalid_argument("tensor_sum_spectrum: d must be >= 1");
  }
  std::vector<double> sums = one_dim;
  for (int axis = 1; axis < d; ++axis) {
    std::vector<double> next;
    next.reserve(sums.size() * one_dim.size());
    for (const double a : sums) {
      for (const double b : one_dim) {
        next.push_back(a + b);
      }
    }
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

std::vector<SinusoidMode> sinusoid_basis_1d(int half_width) {
  if (half_width < 1) {
    throw std::invalid_argument("sinusoid_basis_1d: half-width must be >= 1");
  }
  const LatticeBox line(half_width, 1);
  const int m = line.side();
  const double pi = std::numbers::pi;
  const double norm = std::sqrt(half_width + 0.5);

  std::vector<SinusoidMode> modes;
  modes.reserve(static_cast<std::size_t>(m));
  for (int j = -half_width; j <= half_width; ++j) {
    SinusoidMode mode{j, ScalarField(m), 0.0, 0.0, 0.0};
    double frequency = 0.0;
    for (int n = -half_width; n <= half_width; ++n) {
      double v = 0.0;
      if (j == 0) {
        v = 1.0 / std::sqrt(static_cast<double>(m));
      } else if (j > 0) {
        frequency = (2.0 * j - 1.0) * pi / m;
        v = std::sin(frequency * n) / norm;
      } else {
        frequency = 2.0 * (-j) * pi / m;
        v = std::cos(frequency * n) / norm;
      }
      mode.values[n + half_width] = v;
    }
    mode.claimed_eigenvalue = frequency * frequency;
    const ScalarField neg_lap = -apply_laplacian(mode.values, line);
    mode.exact_eigenvalue = mode.values.dot(neg_lap) / mode.values.squaredNorm();
    mode.residual = (neg_lap - mode.claimed_eigenvalue * mode.values).norm();
    modes.push_back(std::move(mode));
  }
  return modes;
}

DriftCoefficients::DriftCoefficients(int half_width, int dimension, std::vector<double> alpha,
                                     std::vector<double> lambda)
    : half_width_{half_width},
      dimension_{dimension},
      alpha_{std::move(alpha)},
      lambda_{std::move(lambda)},
      modes_{sinusoid_basis_1d(half_width)} {
  const auto m = static_cast<std::size_t>(2 * half_width + 1);
  if (alpha_.size() != m || lambda_.size() != m) {
    throw DimensionMismatch("DriftCoefficients: expected 2N+1 coefficients");
  }
}

double DriftCoefficients::alpha(int j) const { return alpha_.at(static_cast<std::size_t>(j + half_width_)); }

double DriftCoefficients::lambda(int j) const { return lambda_.at(static_cast<std::size_t>(j + half_width_)); }

double DriftCoefficients::reconstruct(int n) const {
  const double phi0 = 1.0 / std::sqrt(2.0 * half_width_ + 1.0);
  double sum = 0.0;
  for (int j = -half_width_; j <= half_width_; ++j) {
    if (j != 0) {
      sum += alpha(j) * modes_[static_cast<std::size_t>(j + half_width_)].values[n + half_width_];
    }
  }
  return std::pow(phi0, dimension_ - 1) * sum;
}

DriftCoefficients alpha_coefficients(int half_width, int dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("alpha_coefficients: dimension must be >= 1");
  }
  const auto modes = sinusoid_basis_1d(half_width);
  const double phi0 = 1.0 / std::sqrt(2.0 * half_width + 1.0);
  const double prefactor = std::pow(phi0, 1 - dimension);

  std::vector<double> alpha(modes.size(), 0.0);
  std::vector<double> lambda(modes.size(), 0.0);
  for (std::size_t idx = 0; idx < modes.size(); ++idx) {
    const auto& mode = modes[idx];
    lambda[idx] = mode.claimed_eigenvalue;
    if (mode.index == 0) {
      continue;
    }
    // Paired as n (phi(n) - phi(-n)) so even modes cancel exactly.
    double sum = 0.0;
    for (int n = 1; n <= half_width; ++n) {
      sum += n * (mode.values[half_width + n] - mode.values[half_width - n]);
    }
    alpha[idx] = prefactor * sum;
  }
  return DriftCoefficients(half_width, dimension, std::move(alpha), std::move(lambda));
}

double alpha_closed_form(int half_width, int dimension, int k) {
  if (k < 1 || k > half_width) {
    throw std::out_of_range("alpha_closed_form: k must lie in 1..N");
  }
  const double m = 2.0 * half_width + 1.0;
  const double y = (2.0 * k - 1.0) * std::numbers::pi / m;
  const double s = std::sin(y / 2.0);
  return std::sqrt(2.0) * std::pow(m, (dimension - 2) / 2.0) * std::sin(half_width * y) / (2.0 * s * s);
}

double drift_energy_check(int half_width, int dimension, double drift) {
  const auto coeffs = alpha_coefficients(half_width, dimension);
  double sum = 0.0;
  for (int j = -half_width; j <= half_width; ++j) {
    if (j != 0) {
      sum += coeffs.alpha(j) * coeffs.alpha(j) * coeffs.lambda(j);
    }
  }
  return dimension * drift * drift * sum;
}

void write_spectrum_csv(const SpectralBasis& basis, std::ostream& out) {
  out << "k,eigenvalue\n";
  const auto old_precision = out.precision(17);
  for (Eigen::Index k = 0; k < basis.size(); ++k) {
    out << k << ',' << basis.eigenvalues()[k] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace selfrepel
