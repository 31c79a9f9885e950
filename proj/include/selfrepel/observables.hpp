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

#ifndef SELFREPEL_OBSERVABLES_HPP
#define SELFREPEL_OBSERVABLES_HPP

#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include <selfrepel/gibbs.hpp>
#include <selfrepel/lattice.hpp>
#include <selfrepel/penalty.hpp>
#include <selfrepel/spectral.hpp>

namespace selfrepel {

// ---------------------------------------------------------------------------------------------
// Effective radius

enum class RadiusMethod {
  kAuto,        ///< All pairs up to kRadiusBruteForceLimit points, reduction above.
  kBruteForce,  ///< All pairs.
  kReduced,     ///< Convex hull (two components) or a far-point filter, then all pairs on the survivors.
};

inline constexpr std::size_t kRadiusBruteForceLimit = 4096;

/// Diameter max_{z,w} ||u(z) - u(w)||_2 of the image point set.
double effective_radius(const FieldConfig& field, RadiusMethod method = RadiusMethod::kAuto);

/// Diameter of site-major packed points with `dim` coordinates each.
double point_set_diameter(std::span<const double> positions, int dim, RadiusMethod method = RadiusMethod::kAuto);

// ---------------------------------------------------------------------------------------------
// Jensen lower bound on the squared local time

struct JensenCheck {
  bool applicable = false;
  bool holds = false;
  double lhs = 0.0;  ///< integral of l^2
  double rhs = 0.0;  ///< 2^D N^D / eps^D
};

/// Checks integral l^2 >= 2^D N^D / eps^D for a field with R_N < eps N whose unit boxes all lie
/// inside [-eps N, eps N]^D. Other fields are reported as not applicable.
JensenCheck penalty_jensen_check(const FieldConfig& field, double eps);

/// Midpoint-rule integral of l^2 over the grid of cells [k h, (k + 1) h)^D, for D = 1 or 2.
/**
 * Independent of the pair-overlap formula: the local time is rasterized cell by cell and squared.
 * The rule is exact, up to rounding, when every coordinate +- 1/2 is a multiple of `h`.
 */
double penalty_grid_integral(std::span<const double> positions, int dim, double h);

// ---------------------------------------------------------------------------------------------
// Pairwise variances of the free field

struct VarianceReport {
  SiteIndex z = 0;
  SiteIndex w = 0;
  double beta = 1.0;
  /// Var(u_i(z) - u_i(w)) for a single component i.
  double variance = 0.0;
  /// The same value per component; components are i.i.d.
  std::vector<double> per_component;
  /// E ||u(z) - u(w)||^2, the sum over components.
  double total = 0.0;
};

/// Exact Var(u_i(z) - u_i(w)) = <e_z - e_w, (-L)^+ (e_z - e_w)> / (2 beta).
/**
 * Factorizes the bordered system [-L 1; 1^T 0] once (sparse LU), so a solver built for one box
 * answers many pairs cheaply.
 */
class PairVarianceSolver {
 public:
  explicit PairVarianceSolver(LatticeBox box);
  ~PairVarianceSolver();
  PairVarianceSolver(PairVarianceSolver&&) noexcept;
  PairVarianceSolver& operator=(PairVarianceSolver&&) noexcept;

  [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }

  /// Zero-mean solution x of -L x = b for zero-mean `b`.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  [[nodiscard]] VarianceReport variance(const GibbsParams& params, SiteIndex z, SiteIndex w) const;

 private:
  struct Impl;
  LatticeBox box_;
  std::unique_ptr<Impl> impl_;
};

VarianceReport variance_pair(const LatticeBox& box, const GibbsParams& params, SiteIndex z, SiteIndex w);

/// The same variance through the spectral sum over non-constant modes.
double variance_pair_spectral(const SpectralBasis& basis, const GibbsParams& params, SiteIndex z, SiteIndex w);

struct VarianceScan {
  double min_variance = 0.0;
  double max_variance = 0.0;
  std::pair<SiteIndex, SiteIndex> argmin{};
  std::pair<SiteIndex, SiteIndex> argmax{};
  /// False when the scan used the deterministic subsample of pairs.
  bool exhaustive = true;
  std::size_t pairs_examined = 0;
};

inline constexpr std::size_t kVarianceScanDenseCap = 6000;

/// Min and max of the pairwise variance over all pairs of distinct sites.
/**
 * Up to `dense_cap` sites the full pseudo-inverse is formed densely and every pair is examined.
 * Above it, pairs are drawn from the sites whose coordinates lie in {-N, 0, N} (corners, center,
 * face and edge midpoints): all pairs among them, plus each of them with its neighbors.
 */
VarianceScan variance_bounds_scan(const LatticeBox& box, const GibbsParams& params,
                                  std::size_t dense_cap = kVarianceScanDenseCap);

// ---------------------------------------------------------------------------------------------
// Reflected random walk on {-N..N}

/// Continuous-time walk whose generator is the reflecting path Laplacian (rate 1 per edge).
class ReflectedWalk {
 public:
  explicit ReflectedWalk(int half_width);

  [[nodiscard]] int half_width() const noexcept { return half_width_; }
  /// 1 / (2N + 1).
  [[nodiscard]] double stationary() const noexcept { return 1.0 / (2.0 * half_width_ + 1.0); }
  /// P_z(Z_t = z), for z in {-N..N}.
  [[nodiscard]] double return_probability(int z, double t) const;
  /// max over z of P_z(Z_t = z).
  [[nodiscard]] double max_return_probability(double t) const;

 private:
  int half_width_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

struct SemigroupRow {
  int half_width = 0;
  double t = 0.0;
  double center = 0.0;    ///< z = 0
  double boundary = 0.0;  ///< z = N
  double supremum = 0.0;  ///< max over z
};

std::vector<SemigroupRow> semigroup_diagnostics(int half_width, const std::vector<double>& times);

/// Log-spaced grid of `count` times from `first` to `last` inclusive.
std::vector<double> log_time_grid(double first, double last, int count);

struct SemigroupDecay {
  /// Least-squares slope of log(sup_z P_z(Z_t = z) - 1/(2N+1)) against log t on [t_lo, t_hi].
  double slope = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  /// Slope of the same quantity started from the center, for reference.
  double center_slope = 0.0;
  /// max over the grid of sup_z P_z(Z_t = z) * sqrt(t), t in [1, N^2].
  double sqrt_t_constant = 0.0;
  /// |P_0(Z_t = 0) - 1/(2N+1)| at t = 50 N^2 log N.
  double late_time_gap = 0.0;
};

/// Decay fit over the decade [N / sqrt(10), N sqrt(10)], the geometric middle of [1, N^2].
SemigroupDecay semigroup_decay(int half_width, int points_per_decade = 40);

void write_semigroup_csv(const std::vector<SemigroupRow>& rows, std::ostream& out);

}  // namespace selfrepel

#endif
