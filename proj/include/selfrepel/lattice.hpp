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

#ifndef SELFREPEL_LATTICE_HPP
#define SELFREPEL_LATTICE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

/**
 * \file
 * \brief The cube {-N..N}^d, its nearest-neighbor structure and the reflecting (Neumann) Laplacian.
 */

namespace selfrepel {

/// Thrown when a field does not match the box it is used with.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A real value per lattice site, in lexicographic site order.
using ScalarField = Eigen::VectorXd;

/// Index of a site in lexicographic order (first coordinate most significant).
using SiteIndex = std::size_t;

/// The box S = [-N, N]^d intersected with Z^d.
/**
 * Sites are numbered lexicographically by their coordinates, with the first coordinate the most
 * significant digit. Neighbor lists and the edge list are built once and shared by every
 * operation that needs them.
 */
class LatticeBox {
 public:
  LatticeBox(int half_width, int dimension);

  [[nodiscard]] int half_width() const noexcept { return half_width_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  /// Points per axis, 2N+1.
  [[nodiscard]] int side() const noexcept { return 2 * half_width_ + 1; }
  [[nodiscard]] std::size_t site_count() const noexcept { return site_count_; }

  /// Unordered nearest-neighbor pairs (i < j), sorted.
  [[nodiscard]] const std::vector<std::pair<SiteIndex, SiteIndex>>& edges() const noexcept { return edges_; }
  [[nodiscard]] std::span<const SiteIndex> neighbors(SiteIndex site) const;
  [[nodiscard]] int degree(SiteIndex site) const;

  [[nodiscard]] std::vector<int> coordinates(SiteIndex site) const;
  [[nodiscard]] int coordinate(SiteIndex site, int axis) const;
  [[nodiscard]] SiteIndex site(std::span<const int> coords) const;
  [[nodiscard]] bool contains(std::span<const int> coords) const noexcept;

  /// Site at the origin.
  [[nodiscard]] SiteIndex center() const;

  friend bool operator==(const LatticeBox& a, const LatticeBox& b) noexcept {
    return a.half_width_ == b.half_width_ && a.dimension_ == b.dimension_;
  }

 private:
  int half_width_;
  int dimension_;
  std::size_t site_count_;
  std::vector<std::size_t> stride_;
  std::vector<std::size_t> neighbor_offsets_;
  std::vector<SiteIndex> neighbor_sites_;
  std::vector<std::pair<SiteIndex, SiteIndex>> edges_;
};

/// A vector-valued field u: S -> R^D, stored as D scalar components.
/**
 * The free field and the tilted measure live on fields whose components each sum to zero;
 * `is_centered` checks that, and `center` projects onto it.
 */
class FieldConfig {
 public:
  FieldConfig(LatticeBox box, int components);
  FieldConfig(LatticeBox box, std::vector<ScalarField> components);

  [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
  [[nodiscard]] int component_count() const noexcept { return static_cast<int>(components_.size()); }
  [[nodiscard]] const ScalarField& component(int i) const { return components_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] ScalarField& component(int i) { return components_.at(static_cast<std::size_t>(i)); }

  /// Value of component `i` at `site`.
  [[nodiscard]] double value(SiteIndex site, int i) const { return components_[static_cast<std::size_t>(i)][static_cast<Eigen::Index>(site)]; }

  /// Point u(x) in R^D.
  [[nodiscard]] Eigen::VectorXd point(SiteIndex site) const;

  /// Site-major packing: values[site * D + i].
  [[nodiscard]] std::vector<double> packed() const;
  static FieldConfig from_packed(const LatticeBox& box, int components, std::span<const double> values);

  void center();
  [[nodiscard]] bool is_centered(double relative_tolerance = 1e-9) const;

 private:
  LatticeBox box_;
  std::vector<ScalarField> components_;
};

/// The linear field x -> slope * x (component i equals slope * x_i), re-centered.
FieldConfig linear_field(const LatticeBox& box, double slope);

/// Sum over neighbor pairs of (f(x) - f(y)) (g(x) - g(y)).
double dirichlet_energy(const ScalarField& f, const ScalarField& g, const LatticeBox& box);

/// Sum of the Dirichlet energies of every component.
double dirichlet_energy(const FieldConfig& field);

/// Reflecting graph Laplacian: (Lf)(x) = sum over in-box neighbors y of f(y) - f(x).
ScalarField apply_laplacian(const ScalarField& f, const LatticeBox& box);

/// Default cap on the number of sites for dense materialization.
inline constexpr std::size_t kDenseSiteCap = 20000;

/// Dense matrix of `apply_laplacian`. Throws std::length_error above `site_cap`.
Eigen::MatrixXd laplacian_matrix(const LatticeBox& box, std::size_t site_cap = kDenseSiteCap);

}  // namespace selfrepel

#endif
