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

#ifndef SELFREPEL_SPECTRAL_HPP
#define SELFREPEL_SPECTRAL_HPP

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include <selfrepel/lattice.hpp>

namespace selfrepel {

/// Orthonormal eigensystem of -Laplacian on a box.
/**
 * Eigenvalues are sorted ascending; column k of `eigenvectors()` is the eigenfield for
 * `eigenvalues()[k]`. The constant mode is column 0, normalized to be positive.
 */
class SpectralBasis {
 public:
  /// Diagonalizes a given symmetric operator. Throws std::invalid_argument if it is not symmetric
  /// or does not have exactly one zero eigenvalue.
  SpectralBasis(LatticeBox box, const Eigen::MatrixXd& negative_laplacian);
  /// Takes precomputed eigenpairs sorted ascending, constant mode first.
  SpectralBasis(LatticeBox box, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

  [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  [[nodiscard]] Eigen::Index constant_mode() const noexcept { return 0; }
  [[nodiscard]] Eigen::Index size() const noexcept { return eigenvalues_.size(); }

  /// max |G - I| for the Gram matrix of the eigenfields.
  [[nodiscard]] double gram_deviation() const;
  /// max_k || -L phi_k - lambda_k phi_k ||_2, with L applied through the sparse operator.
  [[nodiscard]] double max_residual() const;

  /// Replaces one eigenvalue; only for fault-injection checks of the validators.
  void perturb_eigenvalue(Eigen::Index k, double delta) { eigenvalues_[k] += delta; }

 private:
  LatticeBox box_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

inline constexpr double kZeroEigenvalueTolerance = 1e-9;

/// Full eigendecomposition of -Laplacian by dense diagonalization.
SpectralBasis eigendecompose(const LatticeBox& box, std::size_t site_cap = kDenseSiteCap);

/// Same eigensystem assembled from the numerically diagonalized one-dimensional operator as tensor
/// products of its eigenvectors; O(n^2) instead of O(n^3). Ties are ordered lexicographically in
/// the per-axis mode indices.
SpectralBasis eigendecompose_separable(const LatticeBox& box, std::size_t site_cap = kDenseSiteCap);

/// All sums of `d` entries of `one_dim` (with repetition, as a multiset), sorted ascending.
std::vector<double> tensor_sum_spectrum(const std::vector<double>& one_dim, int d);

/// One of the closed-form sinusoids on {-N..N}.
struct SinusoidMode {
  int index;                  ///< 0 for the constant, k > 0 for sines, -k for cosines.
  ScalarField values;         ///< Values at n = -N..N.
  double claimed_eigenvalue;  ///< Continuum-style eigenvalue attached to the closed form.
  double exact_eigenvalue;    ///< Rayleigh quotient of the mode under the discrete operator.
  double residual;            ///< || -L phi - claimed * phi ||_2.
};

/// Closed-form sinusoidal basis on {-N..N}: constant, sines with frequency (2k-1)pi/(2N+1)
/// and cosines with frequency 2k pi/(2N+1), all with normalizer (N + 1/2)^{1/2}.
/**
 * Ordered as index -N..N. The claimed eigenvalue of the sine mode k is ((2k-1)pi/(2N+1))^2 and of
 * the cosine mode -k is (2k pi/(2N+1))^2; the true discrete eigenvalue is 4 sin^2(theta/2) for
 * frequency theta, which is why `residual` is generally nonzero.
 */
std::vector<SinusoidMode> sinusoid_basis_1d(int half_width);

/// Expansion coefficients of the coordinate function n -> n in the sinusoidal basis.
/**
 * `alpha(j)` carries the (phi_0)^{1-d} prefactor, so that
 * phi_0^{d-1} * sum_j alpha(j) phi_j(n) = n.
 */
class DriftCoefficients {
 public:
  DriftCoefficients(int half_width, int dimension, std::vector<double> alpha, std::vector<double> lambda);

  [[nodiscard]] int half_width() const noexcept { return half_width_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  /// Coefficient for mode j in {-N..N}; alpha(0) is 0.
  [[nodiscard]] double alpha(int j) const;
  /// Claimed one-dimensional eigenvalue for mode j.
  [[nodiscard]] double lambda(int j) const;
  /// phi_0^{d-1} * sum_j alpha(j) phi_j(n), which should equal n.
  [[nodiscard]] double reconstruct(int n) const;

 private:
  int half_width_;
  int dimension_;
  std::vector<double> alpha_;
  std::vector<double> lambda_;
  std::vector<SinusoidMode> modes_;
};

DriftCoefficients alpha_coefficients(int half_width, int dimension);

/// sqrt(2) (2N+1)^{(d-2)/2} sin(NY) / (2 sin^2(Y/2)) with Y = (2k-1)pi/(2N+1), for k = 1..N.
double alpha_closed_form(int half_width, int dimension, int k);

/// d a^2 sum_{l != 0} alpha_l^2 lambda_l with the closed-form eigenvalues (inverse temperature 1).
double drift_energy_check(int half_width, int dimension, double drift);

/// CSV "k,eigenvalue" rows, one per mode.
void write_spectrum_csv(const SpectralBasis& basis, std::ostream& out);

}  // namespace selfrepel

#endif
