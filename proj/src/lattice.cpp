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

#include <selfrepel/lattice.hpp>

#include <cmath>
#include <string>

namespace selfrepel {

LatticeBox::LatticeBox(int half_width, int dimension) : half_width_{half_width}, dimension_{dimension} {
  if (half_width < 1) {
    throw std::invalid_argument("LatticeBox: half-width must be >= 1, got " + std::to_string(half_width));
  }
  if (dimension < 1) {
    throw std::invalid_argument("LatticeBox: dimension must be >= 1, got " + std::to_string(dimension));
  }
  const auto m = static_cast<std::size_t>(side());
  stride_.assign(static_cast<std::size_t>(dimension), 1);
  for (int axis = dimension - 2; axis >= 0; --axis) {
    stride_[static_cast<std::size_t>(axis)] = stride_[static_cast<std::size_t>(axis) + 1] * m;
  }
  site_count_ = stride_[0] * m;

  neighbor_offsets_.reserve(site_count_ + 1);
  neighbor_sites_.reserve(site_count_ * 2 * static_cast<std::size_t>(dimension));
  neighbor_offsets_.push_back(0);
  for (SiteIndex s = 0; s < site_count_; ++s) {
    // Lower neighbors first, then upper, axis by axis: keeps lists sorted.
    for (int axis = 0; axis < dimension; ++axis) {
      const auto stride = stride_[static_cast<std::size_t>(axis)];
      if ((s / stride) % m != 0) {
        neighbor_sites_.push_back(s - stride);
      }
    }
    for (int axis = dimension - 1; axis >= 0; --axis) {
      const auto stride = stride_[static_cast<std::size_t>(axis)];
      if ((s / stride) % m != m - 1) {
        neighbor_sites_.push_back(s + stride);
      }
    }
    neighbor_offsets_.push_back(neighbor_sites_.size());
  }
  for (SiteIndex s = 0; s < site_count_; ++s) {
    for (const auto t : neighbors(s)) {
      if (s < t) {
        edges_.emplace_back(s, t);
      }
    }
  }
}

std::span<const SiteIndex> LatticeBox::neighbors(SiteIndex site) const {
  if (site >= site_count_) {
    throw std::out_of_range("LatticeBox::neighbors: site out of range");
  }
  return {neighbor_sites_.data() + neighbor_offsets_[site], neighbor_offsets_[site + 1] - neighbor_offsets_[site]};
}

int LatticeBox::degree(SiteIndex site) const { return static_cast<int>(neighbors(site).size()); }

std::vector<int> LatticeBox::coordinates(SiteIndex site) const {
  std::vector<int> coords(static_cast<std::size_t>(dimension_));
  for (int axis = 0; axis < dimension_; ++axis) {
    coords[static_cast<std::size_t>(axis)] = coordinate(site, axis);
  }
  return coords;
}

int LatticeBox::coordinate(SiteIndex site, int axis) const {
  const auto m = static_cast<std::size_t>(side());
  return static_cast<int>((site / stride_[static_cast<std::size_t>(axis)]) % m) - half_width_;
}

SiteIndex LatticeBox::site(std::span<const int> coords) const {
  if (!contains(coords)) {
    throw std::out_of_range("LatticeBox::site: coordinates outside the box");
  }
  SiteIndex s = 0;
  for (int axis = 0; axis < dimension_; ++axis) {
    s += static_cast<std::size_t>(coords[static_cast<std::size_t>(axis)] + half_width_) *
         stride_[static_cast<std::size_t>(axis)];
  }
  return s;
}

bool LatticeBox::contains(std::span<const int> coords) const noexcept {
  if (coords.size() != static_cast<std::size_t>(dimension_)) {
    return false;
  }
  for (const int c : coords) {
    if (c < -half_width_ || c > half_width_) {
      return false;
    }
  }
  return true;
}

SiteIndex LatticeBox::center() const { return site_count_ / 2; }

FieldConfig::FieldConfig(LatticeBox box, int components) : box_{std::move(box)} {
  if (components < 1) {
    throw std::invalid_argument("FieldConfig: need at least one component");
  }
  components_.assign(static_cast<std::size_t>(components),
                     ScalarField::Zero(static_cast<Eigen::Index>(box_.site_count())));
}

FieldConfig::FieldConfig(LatticeBox box, std::vector<ScalarField> components)
    : box_{std::move(box)}, components_{std::move(components)} {
  if (components_.empty()) {
    throw std::invalid_argument("FieldConfig: need at least one component");
  }
  for (const auto& c : components_) {
    if (static_cast<std::size_t>(c.size()) != box_.site_count()) {
      throw DimensionMismatch("FieldConfig: component length " + std::to_string(c.size()) +
                              " does not match site count " + std::to_string(box_.site_count()));
    }
  }
}

Eigen::VectorXd FieldConfig::point(SiteIndex site) const {
  Eigen::VectorXd p(component_count());
  for (int i = 0; i < component_count(); ++i) {
    p[i] = value(site, i);
  }
  return p;
}

std::vector<double> FieldConfig::packed() const {
  const auto n = box_.site_count();
  const auto dim = static_cast<std::size_t>(component_count());
  std::vector<double> out(n * dim);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < dim; ++i) {
      out[s * dim + i] = components_[i][static_cast<Eigen::Index>(s)];
    }
  }
  return out;
}

FieldConfig FieldConfig::from_packed(const LatticeBox& box, int components, std::span<const double> values) {
  const auto n = box.site_count();
  const auto dim = static_cast<std::size_t>(components);
  if (values.size() != n * dim) {
    throw DimensionMismatch("FieldConfig::from_packed: expected " + std::to_string(n * dim) + " values, got " +
                            std::to_string(values.size()));
  }
  FieldConfig field(box, components);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < dim; ++i) {
      field.components_[i][static_cast<Eigen::Index>(s)] = values[s * dim + i];
    }
  }
  return field;
}

void FieldConfig::center() {
  for (auto& c : components_) {
    c.array() -= c.mean();
  }
}

bool FieldConfig::is_centered(double relative_tolerance) const {
  for (const auto& c : components_) {
    const double scale = std::max(1.0, c.cwiseAbs().sum());
    if (std::abs(c.sum()) > relative_tolerance * scale) {
      return false;
    }
  }
  return true;
}

FieldConfig linear_field(const LatticeBox& box, double slope) {
  FieldConfig field(box, box.dimension());
  for (SiteIndex s = 0; s < box.site_count(); ++s) {
    for (int i = 0; i < box.dimension(); ++i) {
      field.component(i)[static_cast<Eigen::Index>(s)] = slope * box.coordinate(s, i);
    }
  }
  field.center();
  return field;
}

namespace {

void require_matches(const ScalarField& f, const LatticeBox& box, const char* what) {
  if (static_cast<std::size_t>(f.size()) != box.site_count()) {
    throw DimensionMismatch(std::string(what) + ": field has " + std::to_string(f.size()) + " values, box has " +
                            std::to_string(box.site_count()) + " sites");
  }
}

}  // namespace

double dirichlet_energy(const ScalarField& f, const ScalarField& g, const LatticeBox& box) {
  require_matches(f, box, "dirichlet_energy");
  require_matches(g, box, "dirichlet_energy");
  double sum = 0.0;
  for (const auto& [x, y] : box.edges()) {
    const auto i = static_cast<Eigen::Index>(x);
    const auto j = static_cast<Eigen::Index>(y);
    sum += (f[i] - f[j]) * (g[i] - g[j]);
  }
  return sum;
}

double dirichlet_energy(const FieldConfig& field) {
  double sum = 0.0;
  for (int i = 0; i < field.component_count(); ++i) {
    sum += dirichlet_energy(field.component(i), field.component(i), field.box());
  }
  return sum;
}

ScalarField apply_laplacian(const ScalarField& f, const LatticeBox& box) {
  require_matches(f, box, "apply_laplacian");
  ScalarField out(f.size());
  for (SiteIndex s = 0; s < box.site_count(); ++s) {
    const double fs = f[static_cast<Eigen::Index>(s)];
    double acc = 0.0;
    for (const auto t : box.neighbors(s)) {
      acc += f[static_cast<Eigen::Index>(t)] - fs;
    }
    out[static_cast<Eigen::Index>(s)] = acc;
  }
  return out;
}

Eigen::MatrixXd laplacian_matrix(const LatticeBox& box, std::size_t site_cap) {
  const auto n = box.site_count();
  if (n > site_cap) {
    throw std::length_error("laplacian_matrix: " + std::to_string(n) + " sites exceeds the dense cap of " +
                            std::to_string(site_cap));
  }
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& [x, y] : box.edges()) {
    const auto i = static_cast<Eigen::Index>(x);
    const auto j = static_cast<Eigen::Index>(y);
    lap(i, j) += 1.0;
    lap(j, i) += 1.0;
    lap(i, i) -= 1.0;
    lap(j, j) -= 1.0;
  }
  return lap;
}

}  // namespace selfrepel
