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

// The predicted limit of the eigenvalue distribution of J_n: the curve where
// the Lyapunov exponent equals |g|, its density, and the real component.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnlab/ensemble.hpp"
#include "hnlab/spectral_stats.hpp"

namespace hnlab {

/// g = 1/2 E(eta_0 - xi_0), exact from the distribution parameters.
double coupling_g(const EnsembleSpec& spec);

struct CurveParameters {
  double g = 0.0;
  double mean_log_c = 0.0;  // E log c_0 = 1/2 E(xi_0 + eta_0)
  double threshold = 0.0;   // max(E xi_0, E eta_0) = mean_log_c + |g|
};
CurveParameters curve_parameters(const EnsembleSpec& spec);

/// gamma(z) = Phi(z) - E log c_0 evaluated from an IDS estimate.
class ThoulessLyapunov {
 public:
  ThoulessLyapunov(const IdsEstimate& ids, double mean_log_c) : ids_(&ids), mean_log_c_(mean_log_c) {}
  double operator()(cplx z) const { return phi(*ids_, z) - mean_log_c_; }

 private:
  const IdsEstimate* ids_;
  double mean_log_c_;
};

struct CurveOptions {
  std::size_t x_points = 800;
  double curve_tol = 1e-6;
  double tie_band = 1e-9;
  /// Real-axis scan resolution used to find the intervals gamma(x) <= |g|.
  std::size_t scan_points = 8192;
};

struct ArcPoint {
  double x = 0.0;
  double y = 0.0;
  double rho = 0.0;
};

/// Upper half of one contour over [a, a_prime]; the lower half is its mirror image.
struct Arc {
  double a = 0.0;
  double a_prime = 0.0;
  std::vector<ArcPoint> points;

  double length() const;
  /// int rho dl along this upper arc.
  double mass() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CurveModel {
  CurveParameters params;
  std::vector<Arc> arcs;
  /// Real solutions of gamma(x) = |g| outside the arcs; they carry no mass.
  std::vector<double> isolated_points;
  std::vector<Interval> sigma;
  double sigma_mass = 0.0;
  /// 2 * sum of arc masses (both conjugate halves).
  double arc_mass = 0.0;
  /// Largest |gamma - |g|| over traced arc points.
  double max_curve_residual = 0.0;
  std::vector<std::string> warnings;
  IdsEstimate ids;
  std::string ids_hash;

  double total_mass() const { return sigma_mass + arc_mass; }
  /// Distance from z to the traced arcs and their mirror images (+inf if none).
  double distance_to_curve(cplx z) const;
};

/// Arcs of {gamma = |g|} in the upper half-plane. Empty when g = 0.
CurveModel trace_curve(const IdsEstimate& ids, const CurveParameters& params,
                       const CurveOptions& opts = {});

/// Intervals of supp dN where Phi(lambda + i0) exceeds the threshold by more
/// than `tie_band`.
std::vector<Interval> real_support_sigma(const IdsEstimate& ids, double threshold,
                                         double tie_band = 1e-9);

/// rho(z) = |int dN / (lambda - z)| / (2 pi), Im z > 0.
double curve_density(const IdsEstimate& ids, cplx z);

/// trace_curve + real_support_sigma + masses.
CurveModel build_curve_model(const IdsEstimate& ids, const CurveParameters& params,
                             const CurveOptions& opts = {});

using TestFunction = std::function<double(cplx)>;

/// int_Sigma f dN + int_L f rho dl over both conjugate halves of every arc.
double limit_measure_integral(const CurveModel& model, const TestFunction& f);

/// Empirical counterpart (1/n) sum f(z_i).
double empirical_integral(std::span<const cplx> eigenvalues, const TestFunction& f);

TestFunction gaussian_bump(cplx center, double width);
/// p(z) * max(0, 1 - |z|^2/R^2)^2 with p(z) = sum_k coeffs[k] Re(z^k).
TestFunction polynomial_with_cutoff(std::vector<double> coeffs, double radius);

struct CriticalCouplings {
  double g1 = 0.0;  // min over real x of gamma(x)
  double g2 = 0.0;  // max over supp dN of gamma(x)
  double argmin = 0.0;
  double argmax = 0.0;
};
CriticalCouplings critical_couplings(const IdsEstimate& ids, double mean_log_c,
                                     std::size_t scan_points = 8192);

nlohmann::json to_json(const CurveModel& model);
CurveModel curve_from_json(const nlohmann::json& j);

}  // namespace hnlab
