// Copyright 2026 The hnlab Authors
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

#include "hnlab/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hnlab/eig.hpp"
#include "hnlab/error.hpp"
#include "hnlab/parallel.hpp"

namespace hnlab {

IdsEstimate::IdsEstimate(std::vector<double> grid, std::vector<double> values, std::size_t n_used,
                         std::size_t realizations_used)
    : grid_(std::move(grid)), values_(std::move(values)), n_used_(n_used), reps_used_(realizations_used) {
  if (grid_.size() < 2 || grid_.size() != values_.size())
    throw ValidationError("ids: grid and values must have equal length >= 2");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw ValidationError("ids: grid must be strictly increasing");
    if (values_[i] < values_[i - 1]) throw ValidationError("ids: values must be nondecreasing");
  }
  if (values_.front() != 0.0 || values_.back() != 1.0)
    throw ValidationError("ids: N must be 0 at the first node and 1 at the last");
  std::size_t first = 0, last = cells() - 1;
  while (first < cells() && cell_mass(first) <= 0.0) ++first;
  while (last > first && cell_mass(last) <= 0.0) --last;
  support_ = {grid_[first], grid_[last + 1]};
}

double IdsEstimate::support_radius() const noexcept {
  return std::max(std::abs(support_[0]), std::abs(support_[1]));
}

double IdsEstimate::operator()(double lambda) const {
  if (lambda <= grid_.front()) return 0.0;
  if (lambda >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), lambda);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double t = (lambda - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

std::vector<double> padded_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw ValidationError("grid: need at least 2 points");
  double width = hi - lo;
  if (width <= 0.0) width = std::max(1.0, std::abs(lo));
  const double a = lo - 0.05 * width;
  const double b = hi + 0.05 * width;
  std::vector<double> g(points);
  const double m = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = a + (b - a) * (static_cast<double>(i) / m);
  g.back() = b;
  return g;
}

namespace {

std::vector<JacobiMatrix> sample_references(const EnsembleSpec& spec, std::size_t n,
                                            std::size_t reps, unsigned jobs) {
  spec.require_finite_means("estimate_ids");
  if (n < 2) throw ValidationError("estimate_ids: n must be >= 2");
  if (reps < 1) throw ValidationError("estimate_ids: reps must be >= 1");
  std::vector<JacobiMatrix> hs(reps);
  parallel_for(reps, jobs, [&](std::size_t r) {
    hs[r] = OperatorBundle::build(sample(spec, n, r)).reference();
  });
  return hs;
}

IdsEstimate count_on_grid(const std::vector<JacobiMatrix>& hs, std::size_t n,
                          std::span<const double> grid, unsigned jobs) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("estimate_ids: grid must be strictly increasing");
  if (grid.size() < 2) throw ValidationError("estimate_ids: grid needs at least 2 points");
  for (const auto& h : hs) {
    const auto [lo, hi] = h.gershgorin();
    if (lo < grid.front() || hi > grid.back())
      throw ValidationError("estimate_ids: grid does not enclose the Gershgorin bounds of a sample");
  }
  std::vector<std::vector<std::size_t>> counts(hs.size());
  parallel_for(hs.size(), jobs, [&](std::size_t r) {
    counts[r].resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) counts[r][i] = eigencount(hs[r], grid[i]);
  });
  std::vector<double> values(grid.size(), 0.0);
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(hs.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t total = 0;
    for (const auto& c : counts) total += c[i];
    values[i] = static_cast<double>(total) * norm;
  }
  // Endpoints are exact by the enclosure check; pin them against rounding.
  values.front() = 0.0;
  values.back() = 1.0;
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
  return IdsEstimate({grid.begin(), grid.end()}, std::move(values), n, hs.size());
}

}  // namespace

IdsEstimate estimate_ids(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                         std::span<const double> grid, unsigned jobs) {
  return count_on_grid(sample_references(spec, n, reps, jobs), n, grid, jobs);
}

IdsEstimate estimate_ids(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                         std::size_t grid_points, unsigned jobs) {
  const auto hs = sample_references(spec, n, reps, jobs);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& h : hs) {
    const auto [a, b] = h.gershgorin();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  const auto grid = padded_grid(lo, hi, grid_points);
  return count_on_grid(hs, n, grid, jobs);
}

// ---------------------------------------------------------------------------
// Potential and Stieltjes transform of the piecewise-constant density

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGl3Node = 0.7745966692414834;
constexpr double kGl3W0 = 8.0 / 9.0;
constexpr double kGl3W1 = 5.0 / 9.0;
// Cells farther than this many widths from z use 3-point Gauss-Legendre.
constexpr double kFarCells = 20.0;

// Antiderivative of 1/2 log(t^2 + y^2) in t, y >= 0.
double log_primitive(double t, double y) {
  if (y == 0.0) return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t;
  return 0.5 * t * std::log(t * t + y * y) - t + y * std::atan(t / y);
}

}  // namespace

double phi(const IdsEstimate& ids, cplx z) {
  const auto grid = ids.grid();
  const double x = z.real();
  const double y = std::abs(z.imag());
  double acc = 0.0;
  for (std::size_t i = 0; i < ids.cells(); ++i) {
    const double m = ids.cell_mass(i);
    if (m <= 0.0) continue;
    const double a = grid[i], b = grid[i + 1];
    const double h = b - a;
    const double c = 0.5 * (a + b);
    const double dist = std::hypot(c - x, y);
    if (dist > kFarCells * h) {
      const double d = 0.5 * h * kGl3Node;
      auto lg = [&](double lam) { return 0.5 * std::log((lam - x) * (lam - x) + y * y); };
      acc += m * 0.5 * (kGl3W1 * (lg(c - d) + lg(c + d)) + kGl3W0 * lg(c));
    } else {
      acc += m * (log_primitive(b - x, y) - log_primitive(a - x, y)) / h;
    }
  }
  return acc;
}

cplx stieltjes(const IdsEstimate& ids, cplx z) {
  if (z.imag() == 0.0) throw ValidationError("stieltjes: z must be non-real");
  const auto grid = ids.grid();
  cplx acc{};
  for (std::size_t i = 0; i < ids.cells(); ++i) {
    const double m = ids.cell_mass(i);
    if (m <= 0.0) continue;
    const double a = grid[i], b = grid[i + 1];
    const double h = b - a;
    const double c = 0.5 * (a + b);
    if (std::abs(c - z) > kFarCells * h) {
      const double d = 0.5 * h * kGl3Node;
      acc += m * 0.5 *
             (kGl3W1 * (1.0 / (c - d - z) + 1.0 / (c + d - z)) + kGl3W0 * (1.0 / (c - z)));
    } else {
      // lambda - z stays in one open half-plane, so the principal log is continuous.
      acc += m * (std::log(cplx(b) - z) - std::log(cplx(a) - z)) / h;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Lyapunov exponent

double finite_lyapunov(const OperatorBundle& b, cplx z) {
  const TransferState s = transfer_product(b, z, b.size());
  return (std::log(mat2_norm(s.matrix)) + s.log_scale) / static_cast<double>(b.size());
}

std::vector<LyapunovEstimate> lyapunov_transfer(const EnsembleSpec& spec, std::size_t n,
                                                std::size_t reps, std::span<const cplx> zs,
                                                unsigned jobs) {
  spec.require_finite_means("lyapunov_transfer");
  if (reps < 1) throw ValidationError("lyapunov_transfer: reps must be >= 1");
  std::vector<std::vector<double>> per_rep(reps);
  parallel_for(reps, jobs, [&](std::size_t r) {
    const OperatorBundle b = OperatorBundle::build(sample(spec, n, r));
    per_rep[r].resize(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) per_rep[r][i] = finite_lyapunov(b, zs[i]);
  });
  std::vector<LyapunovEstimate> out(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    double mean = 0.0;
    for (std::size_t r = 0; r < reps; ++r) mean += per_rep[r][i];
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (std::size_t r = 0; r < reps; ++r) var += (per_rep[r][i] - mean) * (per_rep[r][i] - mean);
    var = reps > 1 ? var / static_cast<double>(reps - 1) : 0.0;
    auto& e = out[i];
    e.z = zs[i];
    e.gamma_hat = mean;
    e.std_error = std::sqrt(var / static_cast<double>(reps));
    e.n_used = n;
    e.reps = reps;
    e.method = LyapunovMethod::transfer;
    e.real_axis_warning = zs[i].imag() == 0.0;
  }
  return out;
}

LyapunovEstimate lyapunov_transfer(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                                   cplx z, unsigned jobs) {
  return lyapunov_transfer(spec, n, reps, std::span<const cplx>(&z, 1), jobs).front();
}

double lyapunov_thouless(const IdsEstimate& ids, double mean_log_c, cplx z) {
  return phi(ids, z) - mean_log_c;
}

double log_potential(std::span<const double> eigenvalues, cplx z) {
  double acc = 0.0;
  for (double l : eigenvalues) acc += std::log(std::abs(z - l));
  return acc / static_cast<double>(eigenvalues.size());
}

double log_potential(std::span<const cplx> eigenvalues, cplx z) {
  double acc = 0.0;
  for (const cplx& l : eigenvalues) acc += std::log(std::abs(z - l));
  return acc / static_cast<double>(eigenvalues.size());
}

nlohmann::json to_json(const IdsEstimate& ids, const std::string& source_hash) {
  return {{"grid", std::vector<double>(ids.grid().begin(), ids.grid().end())},
          {"values", std::vector<double>(ids.values().begin(), ids.values().end())},
          {"n", ids.n_used()},
          {"reps", ids.realizations_used()},
          {"source_hash", source_hash}};
}

IdsEstimate ids_from_json(const nlohmann::json& j, std::string* source_hash) {
  try {
    if (source_hash) *source_hash = j.value("source_hash", std::string());
    return IdsEstimate(j.at("grid").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(),
                       j.at("n").get<std::size_t>(), j.at("reps").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("ids cache: ") + e.what());
  }
}

}  // namespace hnlab
