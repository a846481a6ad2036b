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

#pragma once

// Limit-theory estimators of the symmetric reference problem: integrated
// density of states, its log-potential and Stieltjes transform, and the
// Lyapunov exponent by transfer products and by the Thouless formula.

#include <array>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnlab/ensemble.hpp"
#include "hnlab/log_complex.hpp"
#include "hnlab/operator.hpp"

namespace hnlab {

/// Piecewise-linear N(lambda) on a strictly increasing grid, N = 0 at the
/// first node and 1 at the last. dN is therefore a piecewise-constant density.
class IdsEstimate {
 public:
  IdsEstimate() = default;
  /// Validates the invariants; throws ValidationError otherwise.
  IdsEstimate(std::vector<double> grid, std::vector<double> values, std::size_t n_used,
              std::size_t realizations_used);

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t n_used() const noexcept { return n_used_; }
  std::size_t realizations_used() const noexcept { return reps_used_; }
  std::size_t cells() const noexcept { return grid_.empty() ? 0 : grid_.size() - 1; }
  double cell_mass(std::size_t i) const { return values_[i + 1] - values_[i]; }

  /// Smallest interval [lo, hi] carrying all of dN.
  std::array<double, 2> support() const noexcept { return support_; }
  double support_radius() const noexcept;

  /// Interpolated N(lambda), clamped to [0, 1] outside the grid.
  double operator()(double lambda) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  std::size_t n_used_ = 0;
  std::size_t reps_used_ = 0;
  std::array<double, 2> support_{0.0, 0.0};
};

/// `points` equally spaced nodes over [lo, hi] padded by 5% of the width on each side.
std::vector<double> padded_grid(double lo, double hi, std::size_t points);

constexpr std::size_t kDefaultIdsGridPoints = 2049;

/// Averages eigencount / n over `reps` realizations at each grid node. The
/// grid must enclose the Gershgorin bounds of every sampled H_n.
IdsEstimate estimate_ids(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                         std::span<const double> grid, unsigned jobs = 1);
/// Same, on a padded grid spanning the sampled Gershgorin bounds.
IdsEstimate estimate_ids(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                         std::size_t grid_points = kDefaultIdsGridPoints, unsigned jobs = 1);

/// Phi(z) = int log|z - lambda| dN(lambda), exact per cell; valid on the real axis.
double phi(const IdsEstimate& ids, cplx z);

/// int dN(lambda) / (lambda - z), Im z != 0.
cplx stieltjes(const IdsEstimate& ids, cplx z);

enum class LyapunovMethod { transfer, thouless };

struct LyapunovEstimate {
  cplx z;
  double gamma_hat = 0.0;
  double std_error = 0.0;  // across-realization spread / sqrt(reps)
  std::size_t n_used = 0;
  std::size_t reps = 0;
  LyapunovMethod method = LyapunovMethod::transfer;
  /// Set for real z, where pathwise transfer estimates are not uniform.
  bool real_axis_warning = false;
};

/// (1/n) log ||S_n(z)|| for one realization (column-sum norm).
double finite_lyapunov(const OperatorBundle& b, cplx z);

LyapunovEstimate lyapunov_transfer(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                                   cplx z, unsigned jobs = 1);
/// One pass over each realization for many z; result i belongs to zs[i].
std::vector<LyapunovEstimate> lyapunov_transfer(const EnsembleSpec& spec, std::size_t n,
                                                std::size_t reps, std::span<const cplx> zs,
                                                unsigned jobs = 1);

/// Phi(z) - E log c_0.
double lyapunov_thouless(const IdsEstimate& ids, double mean_log_c, cplx z);

/// (1/n) sum log|lambda_i - z|, the log-potential of a finite spectrum.
double log_potential(std::span<const double> eigenvalues, cplx z);
double log_potential(std::span<const cplx> eigenvalues, cplx z);

/// Cache form: grid, values, sample sizes and the hash of what produced them.
nlohmann::json to_json(const IdsEstimate& ids, const std::string& source_hash);
IdsEstimate ids_from_json(const nlohmann::json& j, std::string* source_hash = nullptr);

}  // namespace hnlab
