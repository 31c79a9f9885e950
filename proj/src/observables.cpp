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

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <selfrepel/stats.hpp>

namespace selfrepel {

// ---------------------------------------------------------------------------------------------
// Effective radius

namespace {

double squared_distance(const double* p, const double* q, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double t = p[i] - q[i];
    s += t * t;
  }
  return s;
}

double brute_force_diameter_sq(std::span<const double> positions, std::span<const std::size_t> ids, int dim) {
  const auto d = static_cast<std::size_t>(dim);
  double best = 0.0;
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      best = std::max(best, squared_distance(positions.data() + ids[a] * d, positions.data() + ids[b] * d, dim));
    }
  }
  return best;
}

double cross(const double* o, const double* a, const double* b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Andrew's monotone chain; returns hull vertex ids.
std::vector<std::size_t> convex_hull_2d(std::span<const double> positions) {
  const auto count = positions.size() / 2;
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double* p = positions.data() + 2 * a;
    const double* q = positions.data() + 2 * b;
    return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
  });
  if (count < 3) {
    return order;
  }
  std::vector<std::size_t> hull(2 * count);
  std::size_t k = 0;
  auto at = [&](std::size_t id) { return positions.data() + 2 * id; };
  for (std::size_t i = 0; i < count; ++i) {
    while (k >= 2 && cross(at(hull[k - 2]), at(hull[k - 1]), at(order[i])) <= 0.0) {
      --k;
    }
    hull[k++] = order[i];
  }
  for (std::size_t i = count - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(at(hull[k - 2]), at(hull[k - 1]), at(order[i])) <= 0.0) {
      --k;
    }
    hull[k++] = order[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Keeps only points that can belong to a pair longer than a known lower bound.
std::vector<std::size_t> far_point_filter(std::span<const double> positions, int dim) {
  const auto d = static_cast<std::size_t>(dim);
  const auto count = positions.size() / d;
  std::vector<double> center(d, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      center[i] += positions[s * d + i];
    }
  }
  for (auto& c : center) {
    c /= static_cast<double>(count);
  }
  std::vector<double> radius(count);
  std::size_t far = 0;
  for (std::size_t s = 0; s < count; ++s) {
    radius[s] = std::sqrt(squared_distance(positions.data() + s * d, center.data(), dim));
    if (radius[s] > radius[far]) {
      far = s;
    }
  }
  const double max_radius = radius[far];
  // Two rounds of farthest-point iteration give a good lower bound on the diameter.
  double lower_sq = 0.0;
  std::size_t a = far;
  for (int round = 0; round < 2; ++round) {
    std::size_t b = a;
    for (std::size_t s = 0; s < count; ++s) {
      const double dist = squared_distance(positions.data() + a * d, positions.data() + s * d, dim);
      if (dist > lower_sq) {
        lower_sq = dist;
        b = s;
      }
    }
    a = b;
  }
  const double lower = std::sqrt(lower_sq);
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < count; ++s) {
    // |p_s - p_t| <= r_s + r_t <= r_s + max r.
    if (radius[s] + max_radius >= lower * (1.0 - 1e-12)) {
      keep.push_back(s);
    }
  }
  return keep;
}

}  // namespace

double point_set_diameter(std::span<const double> positions, int dim, RadiusMethod method) {
  if (dim < 1 || positions.size() % static_cast<std::size_t>(dim) != 0) {
    throw DimensionMismatch("point_set_diameter: position count is not a multiple of the dimension");
  }
  const auto count = positions.size() / static_cast<std::size_t>(dim);
  if (count < 2) {
    return 0.0;
  }
  if (method == RadiusMethod::kAuto) {
    method = count <= kRadiusBruteForceLimit ? RadiusMethod::kBruteForce : RadiusMethod::kReduced;
  }
  std::vector<std::size_t> ids;
  if (method == RadiusMethod::kBruteForce) {
    ids.resize(count);
    for (std::size_t s = 0; s < count; ++s) {
      ids[s] = s;
    }
  } else if (dim == 2) {
    ids = convex_hull_2d(positions);
  } else {
    ids = far_point_filter(positions, dim);
  }
  return std::sqrt(brute_force_diameter_sq(positions, ids, dim));
}

double effective_radius(const FieldConfig& field, RadiusMethod method) {
  const auto packed = field.packed();
  return point_set_diameter(packed, field.component_count(), method);
}

// ---------------------------------------------------------------------------------------------
// Jensen lower bound

JensenCheck penalty_jensen_check(const FieldConfig& field, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("penalty_jensen_check: eps must be > 0");
  }
  JensenCheck out;
  const int dim = field.component_count();
  const double n_half = field.box().half_width();
  const double extent = eps * n_half;
  out.rhs = std::pow(2.0 * n_half / eps, dim);

  if (!(effective_radius(field) < extent)) {
    return out;
  }
  // Every unit box around a point must sit inside [-eps N, eps N]^D for the local time to
  // integrate to the site count over that cube.
  for (int i = 0; i < dim; ++i) {
    if (field.component(i).cwiseAbs().maxCoeff() > extent - 0.5) {
      return out;
    }
  }
  out.applicable = true;
  out.lhs = penalty_integral(field).total;
  out.holds = out.lhs >= out.rhs;
  return out;
}

double penalty_grid_integral(std::span<const double> positions, int dim, double h) {
  if (dim < 1 || dim > 2) {
    throw std::invalid_argument("penalty_grid_integral: only D = 1 or 2 is supported");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("penalty_grid_integral: spacing must be > 0");
  }
  const auto d = static_cast<std::size_t>(dim);
  const auto count = positions.size() / d;
  if (count == 0) {
    return 0.0;
  }
  // Cells whose midpoint (k + 1/2) h lies in [c - 1/2, c + 1/2).
  std::vector<std::int64_t> first(positions.size());
  std::vector<std::int64_t> last(positions.size());
  std::vector<std::int64_t> lo(d, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> hi(d, std::numeric_limits<std::int64_t>::min());
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      const double c = positions[s * d + i];
      first[s * d + i] = static_cast<std::int64_t>(std::ceil((c - 0.5) / h - 0.5));
      last[s * d + i] = static_cast<std::int64_t>(std::ceil((c + 0.5) / h - 0.5)) - 1;
      lo[i] = std::min(lo[i], first[s * d + i]);
      hi[i] = std::max(hi[i], last[s * d + i]);
    }
  }
  if (d == 1) {
    double sum = 0.0;
    for (std::int64_t k = lo[0]; k <= hi[0]; ++k) {
      std::int64_t local = 0;
      for (std::size_t s = 0; s < count; ++s) {
        local += (k >= first[s] && k <= last[s]) ? 1 : 0;
      }
      sum += static_cast<double>(local * local);
    }
    return sum * h;
  }
  // Row by row along axis 0; within a row the local time is a prefix sum of box starts and ends.
  const auto inner = static_cast<std::size_t>(hi[1] - lo[1] + 1);
  std::vector<std::int64_t> diff(inner + 1);
  double sum = 0.0;
  for (std::int64_t row = lo[0]; row <= hi[0]; ++row) {
    std::fill(diff.begin(), diff.end(), 0);
    for (std::size_t s = 0; s < count; ++s) {
      if (row < first[2 * s] || row > last[2 * s]) {
        continue;
      }
      ++diff[static_cast<std::size_t>(first[2 * s + 1] - lo[1])];
      --diff[static_cast<std::size_t>(last[2 * s + 1] - lo[1] + 1)];
    }
    std::int64_t local = 0;
    for (std::size_t k = 0; k < inner; ++k) {
      local += diff[k];
      sum += static_cast<double>(local * local);
    }
  }
  return sum * h * h;
}

// ---------------------------------------------------------------------------------------------
// Pairwise variances

struct PairVarianceSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

PairVarianceSolver::PairVarianceSolver(LatticeBox box) : box_{std::move(box)}, impl_{std::make_unique<Impl>()} {
  const auto n = static_cast<int>(box_.site_count());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(box_.edges().size() * 4 + 2 * static_cast<std::size_t>(n));
  for (const auto& [x, y] : box_.edges()) {
    const auto i = static_cast<int>(x);
    const auto j = static_cast<int>(y);
    triplets.emplace_back(i, i, 1.0);
    triplets.emplace_back(j, j, 1.0);
    triplets.emplace_back(i, j, -1.0);
    triplets.emplace_back(j, i, -1.0);
  }
  // Border with the all-ones constraint so the system is nonsingular on R^n x R.
  for (int i = 0; i < n; ++i) {
    triplets.emplace_back(i, n, 1.0);
    triplets.emplace_back(n, i, 1.0);
  }
  Eigen::SparseMatrix<double> system(n + 1, n + 1);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();
  impl_->lu.analyzePattern(system);
  impl_->lu.factorize(system);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("PairVarianceSolver: factorization failed");
  }
}

PairVarianceSolver::~PairVarianceSolver() = default;
PairVarianceSolver::PairVarianceSolver(PairVarianceSolver&&) noexcept = default;
PairVarianceSolver& PairVarianceSolver::operator=(PairVarianceSolver&&) noexcept = default;

Eigen::VectorXd PairVarianceSolver::solve(const Eigen::VectorXd& b) const {
  const auto n = static_cast<Eigen::Index>(box_.site_count());
  if (b.size() != n) {
    throw DimensionMismatch("PairVarianceSolver::solve: right-hand side has the wrong length");
  }
  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = b;
  rhs[n] = 0.0;
  const Eigen::VectorXd x = impl_->lu.solve(rhs);
  return x.head(n);
}

VarianceReport PairVarianceSolver::variance(const GibbsParams& params, SiteIndex z, SiteIndex w) const {
  if (z == w) {
    throw std::invalid_argument("variance_pair: z and w must be distinct sites");
  }
  const auto n = static_cast<Eigen::Index>(box_.site_count());
  if (z >= box_.site_count() || w >= box_.site_count()) {
    throw std::out_of_range("variance_pair: site out of range");
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[static_cast<Eigen::Index>(z)] = 1.0;
  b[static_cast<Eigen::Index>(w)] = -1.0;
  const Eigen::VectorXd x = solve(b);
  VarianceReport report;
  report.z = z;
  report.w = w;
  report.beta = params.beta();
  report.variance = b.dot(x) / (2.0 * params.beta());
  report.per_component.assign(static_cast<std::size_t>(box_.dimension()), report.variance);
  report.total = report.variance * box_.dimension();
  return report;
}

VarianceReport variance_pair(const LatticeBox& box, const GibbsParams& params, SiteIndex z, SiteIndex w) {
  return PairVarianceSolver(box).variance(params, z, w);
}

double variance_pair_spectral(const SpectralBasis& basis, const GibbsParams& params, SiteIndex z, SiteIndex w) {
  if (z == w) {
    throw std::invalid_argument("variance_pair_spectral: z and w must be distinct sites");
  }
  const auto& phi = basis.eigenvectors();
  const auto& lambda = basis.eigenvalues();
  double sum = 0.0;
  for (Eigen::Index k = 1; k < basis.size(); ++k) {
    const double diff = phi(static_cast<Eigen::Index>(z), k) - phi(static_cast<Eigen::Index>(w), k);
    sum += diff * diff / lambda[k];
  }
  return sum / (2.0 * params.beta());
}

namespace {

std::vector<SiteIndex> landmark_sites(const LatticeBox& box) {
  std::vector<SiteIndex> sites;
  const int dim = box.dimension();
  const int n = box.half_width();
  std::vector<int> digit(static_cast<std::size_t>(dim), 0);
  while (true) {
    std::vector<int> coords(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      coords[static_cast<std::size_t>(i)] = (digit[static_cast<std::size_t>(i)] - 1) * n;
    }
    sites.push_back(box.site(coords));
    int axis = 0;
    while (axis < dim && digit[static_cast<std::size_t>(axis)] == 2) {
      digit[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == dim) {
      break;
    }
    ++digit[static_cast<std::size_t>(axis)];
  }
  std::sort(sites.begin(), sites.end());
  return sites;
}

void consider(VarianceScan& scan, double v, SiteIndex a, SiteIndex b) {
  if (scan.pairs_examined == 0 || v < scan.min_variance) {
    scan.min_variance = v;
    scan.argmin = {a, b};
  }
  if (scan.pairs_examined == 0 || v > scan.max_variance) {
    scan.max_variance = v;
    scan.argmax = {a, b};
  }
  ++scan.pairs_examined;
}

}  // namespace

VarianceScan variance_bounds_scan(const LatticeBox& box, const GibbsParams& params, std::size_t dense_cap) {
  VarianceScan scan;
  const auto n = box.site_count();
  if (n < 2) {
    throw std::invalid_argument("variance_bounds_scan: need at least two sites");
  }
  const double inv_two_beta = 1.0 / (2.0 * params.beta());
  if (n <= dense_cap) {
    // (-L + 11^T / n)^{-1} differs from the pseudo-inverse by a multiple of 11^T, which cancels
    // in every pairwise variance.
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd system = -laplacian_matrix(box, dense_cap);
    system.array() += 1.0 / static_cast<double>(n);
    const Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("variance_bounds_scan: Cholesky factorization failed");
    }
    const Eigen::MatrixXd green = llt.solve(Eigen::MatrixXd::Identity(m, m));
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = a + 1; b < m; ++b) {
        const double v = (green(a, a) + green(b, b) - 2.0 * green(a, b)) * inv_two_beta;
        consider(scan, v, static_cast<SiteIndex>(a), static_cast<SiteIndex>(b));
      }
    }
    scan.exhaustive = true;
    return scan;
  }

  const PairVarianceSolver solver(box);
  const auto landmarks = landmark_sites(box);
  std::vector<std::pair<SiteIndex, SiteIndex>> pairs;
  for (std::size_t a = 0; a < landmarks.size(); ++a) {
    for (std::size_t b = a + 1; b < landmarks.size(); ++b) {
      pairs.emplace_back(landmarks[a], landmarks[b]);
    }
    for (const auto t : box.neighbors(landmarks[a])) {
      pairs.emplace_back(std::min(landmarks[a], t), std::max(landmarks[a], t));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (const auto& [a, b] : pairs) {
    consider(scan, solver.variance(params, a, b).variance, a, b);
  }
  scan.exhaustive = false;
  return scan;
}

// ---------------------------------------------------------------------------------------------
// Reflected random walk

ReflectedWalk::ReflectedWalk(int half_width) : half_width_{half_width} {
  const LatticeBox line(half_width, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(-laplacian_matrix(line));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("ReflectedWalk: eigensolver did not converge");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

double ReflectedWalk::return_probability(int z, double t) const {
  if (z < -half_width_ || z > half_width_) {
    throw std::out_of_range("ReflectedWalk::return_probability: site outside {-N..N}");
  }
  if (t < 0.0) {
    throw std::invalid_argument("ReflectedWalk::return_probability: negative time");
  }
  const auto row = static_cast<Eigen::Index>(z + half_width_);
  double p = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    const double v = eigenvectors_(row, k);
    p += v * v * std::exp(-t * std::max(0.0, eigenvalues_[k]));
  }
  return p;
}

double ReflectedWalk::max_return_probability(double t) const {
  double best = 0.0;
  for (int z = -half_width_; z <= half_width_; ++z) {
    best = std::max(best, return_probability(z, t));
  }
  return best;
}

std::vector<SemigroupRow> semigroup_diagnostics(int half_width, const std::vector<double>& times) {
  const ReflectedWalk walk(half_width);
  std::vector<SemigroupRow> rows;
  rows.reserve(times.size());
  for (const double t : times) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("semigroup_diagnostics: times must be positive");
    }
    rows.push_back({half_width, t, walk.return_probability(0, t), walk.return_probability(half_width, t),
                    walk.max_return_probability(t)});
  }
  return rows;
}

std::vector<double> log_time_grid(double first, double last, int count) {
  if (!(first > 0.0) || !(last > first) || count < 2) {
    throw std::invalid_argument("log_time_grid: need 0 < first < last and count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lf = std::log(first);
  const double step = (std::log(last) - lf) / (count - 1);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(lf + step * i);
  }
  out.back() = last;
  return out;
}

SemigroupDecay semigroup_decay(int half_width, int points_per_decade) {
  const ReflectedWalk walk(half_width);
  const double n = half_width;
  SemigroupDecay out;
  out.t_lo = n / std::sqrt(10.0);
  out.t_hi = n * std::sqrt(10.0);
  const auto ts = log_time_grid(out.t_lo, out.t_hi, points_per_decade + 1);
  std::vector<double> sup_gap;
  std::vector<double> center_gap;
  for (const double t : ts) {
    sup_gap.push_back(walk.max_return_probability(t) - walk.stationary());
    center_gap.push_back(walk.return_probability(0, t) - walk.stationary());
  }
  out.slope = stats::loglog_fit(ts, sup_gap).slope;
  out.center_slope = stats::loglog_fit(ts, center_gap).slope;

  for (const double t : log_time_grid(1.0, std::max(2.0, n * n), 3 * points_per_decade + 1)) {
    out.sqrt_t_constant = std::max(out.sqrt_t_constant, walk.max_return_probability(t) * std::sqrt(t));
  }
  const double late = 50.0 * n * n * std::log(std::max(n, 2.0));
  out.late_time_gap = std::abs(walk.return_probability(0, late) - walk.stationary());
  return out;
}

void write_semigroup_csv(const std::vector<SemigroupRow>& rows, std::ostream& out) {
  out << "N,t,return_prob,return_prob_center,return_prob_boundary\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : rows) {
    out << r.half_width << ',' << r.t << ',' << r.supremum << ',' << r.center << ',' << r.boundary << '\n';
  }
  out.precision(old_precision);
}

}  // namespace selfrepel
