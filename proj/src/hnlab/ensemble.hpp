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

// Coefficient ensembles for the periodic tridiagonal matrices studied here.
//
// A realization is the triple sequence (xi_k, eta_k, q_k), k = 0..n. In the
// default logarithmic coordinates the sub-diagonal entries of J_n are
// -exp(xi_k) and the super-diagonal entries are -exp(eta_k); see operator.hpp
// for the full index table. In raw coordinates the xi/eta arrays hold the
// sub/super-diagonal entries themselves (signs free), which is only usable for
// sampling spectra.

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hnlab {

namespace dist {
struct Constant {
  double value = 0.0;
};
struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
/// `first` with probability `prob_first`, otherwise `second`.
struct TwoPoint {
  double first = 0.0;
  double second = 1.0;
  double prob_first = 0.5;
};
struct Gaussian {
  double mean = 0.0;
  double sd = 1.0;
};
struct Cauchy {
  double loc = 0.0;
  double scale = 1.0;
};
/// log(u) with u ~ Uni[lo, hi], 0 <= lo < hi.
struct LogUniform {
  double lo = 0.0;
  double hi = 1.0;
};
}  // namespace dist

class DistributionSpec {
 public:
  using Variant = std::variant<dist::Constant, dist::Uniform, dist::TwoPoint, dist::Gaussian,
                               dist::Cauchy, dist::LogUniform>;

  DistributionSpec() = default;
  DistributionSpec(Variant v) : v_(std::move(v)) {}  // NOLINT: implicit by design
  template <class T>
    requires std::is_constructible_v<Variant, T>
  DistributionSpec(T t) : v_(std::move(t)) {}  // NOLINT

  const Variant& variant() const noexcept { return v_; }
  std::string kind_name() const;

  /// Throws ValidationError mentioning `field` when parameters are inconsistent.
  void validate(const std::string& field) const;

  bool heavy_tailed() const noexcept { return std::holds_alternative<dist::Cauchy>(v_); }
  bool is_constant() const noexcept { return std::holds_alternative<dist::Constant>(v_); }

  /// Exact expectation. Throws ValidationError for heavy-tailed laws.
  double mean() const;

  /// Maps two independent 64-bit words to one draw.
  double draw(std::uint64_t w0, std::uint64_t w1) const;

 private:
  Variant v_{dist::Constant{}};
};

enum class SamplingMode { iid, periodic, constant };
enum class Coordinates { log, raw };

struct EnsembleSpec {
  DistributionSpec xi;
  DistributionSpec eta;
  DistributionSpec q;
  SamplingMode mode = SamplingMode::iid;
  /// Rows (xi, eta, q) cycled with period table.size(); periodic mode only.
  std::vector<std::array<double, 3>> table;
  Coordinates coordinates = Coordinates::log;
  std::uint64_t seed = 0;

  void validate() const;

  /// Throws ValidationError unless xi/eta have finite means and the
  /// coordinates are logarithmic (needed for all limit-theory operations).
  void require_finite_means(const std::string& operation) const;
};

struct CoefficientSequence {
  std::size_t n = 0;
  std::vector<double> xi;   // size n + 1
  std::vector<double> eta;  // size n + 1
  std::vector<double> q;    // size n + 1, q[0] unused by J_n
  EnsembleSpec spec;
  std::uint64_t stream = 0;

  bool raw() const noexcept { return spec.coordinates == Coordinates::raw; }
};

/// Realization `stream` of the ensemble, indices 0..n. Pure in (spec, n, stream).
CoefficientSequence sample(const EnsembleSpec& spec, std::size_t n, std::uint64_t stream = 0);

struct EmpiricalMeans {
  double mean_xi = 0.0;
  double mean_eta = 0.0;
  /// Mean of log(1 + |q_k|).
  double mean_q_logabs = 0.0;
};

/// Arithmetic means over indices 0..n-1.
EmpiricalMeans empirical_means(const CoefficientSequence& seq);

/// Exact E xi_0 and E eta_0 from the distribution parameters. Periodic mode
/// averages over the table.
struct EnsembleMoments {
  double mean_xi = 0.0;
  double mean_eta = 0.0;
};
EnsembleMoments ensemble_moments(const EnsembleSpec& spec);

// Structured-text (JSON) form. Field names are documented in README.md.
nlohmann::json to_json(const DistributionSpec& d);
DistributionSpec distribution_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json to_json(const EnsembleSpec& spec);
/// The seed is mandatory.
EnsembleSpec ensemble_from_json(const nlohmann::json& j);

}  // namespace hnlab
