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

#include <selfrepel/penalty.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace selfrepel {

CellList::CellList(int dim) : dim_{dim}, bits_{dim > 0 ? std::min(21, 64 / dim) : 0} {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("CellList: dimension must be in 1.." + std::to_string(kMaxDim));
  }
}

std::uint64_t CellList::pack(const std::int64_t* c) const noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
  const std::int64_t bias = std::int64_t{1} << (bits_ - 1);
  std::uint64_t key = 0;
  for (int i = 0; i < dim_; ++i) {
    key = (key << bits_) | (static_cast<std::uint64_t>(c[i] + bias) & mask);
  }
  return key;
}

std::uint64_t CellList::key_of(const double* p) const {
  const std::int64_t limit = (std::int64_t{1} << (bits_ - 1)) - 2;
  std::int64_t c[kMaxDim];
  for (int i = 0; i < dim_; ++i) {
    if (!std::isfinite(p[i])) {
      throw std::domain_error("CellList: non-finite coordinate");
    }
    c[i] = cell_coordinate(p[i]);
    if (c[i] > limit || c[i] < -limit) {
      throw std::out_of_range("CellList: coordinate " + std::to_string(p[i]) + " outside the hashable range");
    }
  }
  return pack(c);
}

void CellList::build(std::span<const double> positions) {
  cells_.clear();
  const auto dim = static_cast<std::size_t>(dim_);
  if (positions.size() % dim != 0) {
    throw DimensionMismatch("CellList::build: position count is not a multiple of the dimension");
  }
  const auto count = positions.size() / dim;
  for (std::size_t s = 0; s < count; ++s) {
    insert(static_cast<std::uint32_t>(s), positions.data() + s * dim);
  }
}

void CellList::insert(std::uint32_t id, const double* p) { cells_[key_of(p)].push_back(id); }

void CellList::remove(std::uint32_t id, const double* p) {
  const auto it = cells_.find(key_of(p));
  if (it == cells_.end()) {
    throw std::logic_error("CellList::remove: cell not found");
  }
  auto& ids = it->second;
  const auto pos = std::find(ids.begin(), ids.end(), id);
  if (pos == ids.end()) {
    throw std::logic_error("CellList::remove: id not found in its cell");
  }
  *pos = ids.back();
  ids.pop_back();
  if (ids.empty()) {
    cells_.erase(it);
  }
}

void CellList::relocate(std::uint32_t id, const double* from, const double* to) {
  if (key_of(from) == key_of(to)) {
    return;
  }
  remove(id, from);
  insert(id, to);
}

namespace {

// Both evaluation paths add nonzero overlaps in ascending (i, j) order, so their sums agree bit for bit.
PenaltyBreakdown finish(std::size_t count, double half_cross, std::size_t pairs) {
  PenaltyBreakdown out;
  out.diagonal = static_cast<double>(count);
  out.off_diagonal = 2.0 * half_cross;
  out.total = out.diagonal + out.off_diagonal;
  out.overlapping_pairs = pairs;
  return out;
}

/// Counting-sort grid over the bounding box of the occupied cells, or nothing if that box is
/// much larger than the point count.
struct DenseGrid {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> width;
  std::vector<std::size_t> start;  // per cell, into `members`
  std::vector<std::uint32_t> members;
  std::vector<std::size_t> cell_of;
};

bool build_dense_grid(std::span<const double> positions, int dim, DenseGrid& grid) {
  const auto d = static_cast<std::size_t>(dim);
  const auto count = positions.size() / d;
  if (count == 0) {
    return false;
  }
  std::vector<std::int64_t> hi(d);
  grid.lo.assign(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    grid.lo[i] = hi[i] = static_cast<std::int64_t>(std::floor(positions[i]));
  }
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      const double x = positions[s * d + i];
      if (!std::isfinite(x)) {
        throw std::domain_error("penalty: non-finite coordinate");
      }
      const auto c = static_cast<std::int64_t>(std::floor(x));
      grid.lo[i] = std::min(grid.lo[i], c);
      hi[i] = std::max(hi[i], c);
    }
  }
  const double budget = 8.0 * static_cast<double>(count) + 1024.0;
  double cells = 1.0;
  grid.width.assign(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    grid.width[i] = hi[i] - grid.lo[i] + 1;
    cells *= static_cast<double>(grid.width[i]);
  }
  if (cells > budget) {
    return false;
  }
  const auto total = static_cast<std::size_t>(cells);
  grid.cell_of.resize(count);
  std::vector<std::size_t> fill(total + 1, 0);
  for (std::size_t s = 0; s < count; ++s) {
    std::size_t cell = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto c = static_cast<std::int64_t>(std::floor(positions[s * d + i])) - grid.lo[i];
      cell = cell * static_cast<std::size_t>(grid.width[i]) + static_cast<std::size_t>(c);
    }
    grid.cell_of[s] = cell;
    ++fill[cell + 1];
  }
  for (std::size_t c = 0; c < total; ++c) {
    fill[c + 1] += fill[c];
  }
  grid.start = fill;
  grid.members.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    grid.members[fill[grid.cell_of[s]]++] = static_cast<std::uint32_t>(s);
  }
  return true;
}

template <class F>
void for_each_dense_neighbor(const DenseGrid& grid, std::size_t cell, int dim, F&& f) {
  const auto d = static_cast<std::size_t>(dim);
  std::int64_t base[CellList::kMaxDim];
  std::size_t rest = cell;
  for (std::size_t i = d; i-- > 0;) {
    const auto w = static_cast<std::size_t>(grid.width[i]);
    base[i] = static_cast<std::int64_t>(rest % w);
    rest /= w;
  }
  int offset[CellList::kMaxDim];
  for (std::size_t i = 0; i < d; ++i) {
    offset[i] = -1;
  }
  while (true) {
    bool inside = true;
    std::size_t c = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t k = base[i] + offset[i];
      if (k < 0 || k >= grid.width[i]) {
        inside = false;
        break;
      }
      c = c * static_cast<std::size_t>(grid.width[i]) + static_cast<std::size_t>(k);
    }
    if (inside) {
      for (std::size_t m = grid.start[c]; m < grid.start[c + 1]; ++m) {
        f(grid.members[m]);
      }
    }
    std::size_t axis = 0;
    while (axis < d && offset[axis] == 1) {
      offset[axis] = -1;
      ++axis;
    }
    if (axis == d) {
      break;
    }
    ++offset[axis];
  }
}

}  // namespace

PenaltyBreakdown penalty_from_positions(std::span<const double> positions, int dim, bool allow_dense_grid) {
  if (dim < 1 || dim > CellList::kMaxDim) {
    throw std::invalid_argument("penalty: dimension must be in 1.." + std::to_string(CellList::kMaxDim));
  }
  DenseGrid grid;
  if (allow_dense_grid && build_dense_grid(positions, dim, grid)) {
    const auto d = static_cast<std::size_t>(dim);
    const auto count = positions.size() / d;
    double half_cross = 0.0;
    std::size_t pairs = 0;
    std::vector<std::uint32_t> partners;
    for (std::size_t i = 0; i < count; ++i) {
      const double* p = positions.data() + i * d;
      partners.clear();
      for_each_dense_neighbor(grid, grid.cell_of[i], dim, [&](std::uint32_t j) {
        if (j > i) {
          partners.push_back(j);
        }
      });
      std::sort(partners.begin(), partners.end());
      for (const auto j : partners) {
        const double v = box_overlap(p, positions.data() + j * d, dim);
        if (v > 0.0) {
          half_cross += v;
          ++pairs;
        }
      }
    }
    return finish(count, half_cross, pairs);
  }

  CellList cells(dim);
  cells.build(positions);
  const auto d = static_cast<std::size_t>(dim);
  const auto count = positions.size() / d;

  double half_cross = 0.0;
  std::size_t pairs = 0;
  std::vector<std::uint32_t> partners;
  for (std::size_t i = 0; i < count; ++i) {
    const double* p = positions.data() + i * d;
    partners.clear();
    cells.for_each_near(p, [&](std::uint32_t j) {
      if (j > i) {
        partners.push_back(j);
      }
    });
    std::sort(partners.begin(), partners.end());
    for (const auto j : partners) {
      const double v = box_overlap(p, positions.data() + j * d, dim);
      if (v > 0.0) {
        half_cross += v;
        ++pairs;
      }
    }
  }
  return finish(count, half_cross, pairs);
}

PenaltyBreakdown penalty_integral(const FieldConfig& field) {
  const auto packed = field.packed();
  return penalty_from_positions(packed, field.component_count());
}

PenaltyBreakdown penalty_integral_naive(const FieldConfig& field) {
  const auto packed = field.packed();
  const int dim = field.component_count();
  const auto d = static_cast<std::size_t>(dim);
  const auto count = field.box().site_count();
  double half_cross = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double v = box_overlap(packed.data() + i * d, packed.data() + j * d, dim);
      if (v > 0.0) {
        half_cross += v;
        ++pairs;
      }
    }
  }
  return finish(count, half_cross, pairs);
}

}  // namespace selfrepel
