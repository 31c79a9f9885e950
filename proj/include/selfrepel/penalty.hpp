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

#ifndef SELFREPEL_PENALTY_HPP
#define SELFREPEL_PENALTY_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include <selfrepel/lattice.hpp>

/**
 * \file
 * \brief Exact integral of the squared local time, and the unit-cell hash used to evaluate it.
 *
 * With l(y) the number of points u(x) in the unit box centered at y, the integral of l^2 over R^D
 * is the sum over ordered pairs (x, x') of the overlap volume of the unit boxes centered at u(x)
 * and u(x'), which is prod_i max(0, 1 - |u_i(x) - u_i(x')|). Only pairs at L-infinity distance
 * below 1 contribute, and those always sit in adjacent unit cells.
 */

namespace selfrepel {

/// Overlap volume of two unit boxes centered at `p` and `q`.
inline double box_overlap(const double* p, const double* q, int dim) noexcept {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) {
    const double gap = 1.0 - std::abs(p[i] - q[i]);
    if (gap <= 0.0) {
      return 0.0;
    }
    v *= gap;
  }
  return v;
}

/// Unit-cell spatial hash over points in R^D.
class CellList {
 public:
  explicit CellList(int dim);

  [[nodiscard]] int dimension() const noexcept { return dim_; }

  /// Rebuilds from site-major packed positions (`positions.size()` a multiple of D).
  void build(std::span<const double> positions);
  void insert(std::uint32_t id, const double* p);
  void remove(std::uint32_t id, const double* p);
  /// Moves `id` between cells if needed.
  void relocate(std::uint32_t id, const double* from, const double* to);

  /// Calls `f(id)` for every stored id in the 3^D cells around `p`.
  template <class F>
  void for_each_near(const double* p, F&& f) const {
    std::int64_t base[kMaxDim];
    for (int i = 0; i < dim_; ++i) {
      base[i] = cell_coordinate(p[i]);
    }
    int offset[kMaxDim];
    for (int i = 0; i < dim_; ++i) {
      offset[i] = -1;
    }
    while (true) {
      std::int64_t c[kMaxDim];
      for (int i = 0; i < dim_; ++i) {
        c[i] = base[i] + offset[i];
      }
      if (const auto it = cells_.find(pack(c)); it != cells_.end()) {
        for (const auto id : it->second) {
          f(id);
        }
      }
      int axis = 0;
      while (axis < dim_ && offset[axis] == 1) {
        offset[axis] = -1;
        ++axis;
      }
      if (axis == dim_) {
        break;
      }
      ++offset[axis];
    }
  }

  static constexpr int kMaxDim = 4;

 private:
  static std::int64_t cell_coordinate(double x) noexcept { return static_cast<std::int64_t>(std::floor(x)); }
  [[nodiscard]] std::uint64_t key_of(const double* p) const;
  [[nodiscard]] std::uint64_t pack(const std::int64_t* c) const noexcept;

  int dim_;
  int bits_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

/// Split of the squared-local-time integral into the diagonal (x = x') and cross terms.
struct PenaltyBreakdown {
  double total = 0.0;
  double diagonal = 0.0;
  double off_diagonal = 0.0;
  /// Unordered pairs x != x' with nonzero overlap.
  std::size_t overlapping_pairs = 0;
};

/// Exact integral of l^2, enumerating only near pairs through a cell list.
PenaltyBreakdown penalty_integral(const FieldConfig& field);

/// Same value by visiting every unordered pair; identical summation order to `penalty_integral`.
PenaltyBreakdown penalty_integral_naive(const FieldConfig& field);

/// Evaluation on site-major packed positions with `dim` coordinates per point.
/**
 * Uses a counting-sort grid when the occupied cells fit a compact bounding box and the hashed
 * `CellList` otherwise; `allow_dense_grid = false` forces the hashed path.
 */
PenaltyBreakdown penalty_from_positions(std::span<const double> positions, int dim, bool allow_dense_grid = true);

}  // namespace selfrepel

#endif
