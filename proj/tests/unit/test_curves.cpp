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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hnlab/curves.hpp"
#include "support/oracles.hpp"

using namespace hnlab;

namespace {

EnsembleSpec free_spec(double g) {
  EnsembleSpec s;
  s.xi = dist::Constant{-g};
  s.eta = dist::Constant{g};
  s.q = dist::Constant{0.0};
  return s;
}

const IdsEstimate& free_ids() {
  static const IdsEstimate ids = estimate_ids(free_spec(0.0), 5000, 1);
  return ids;
}

// Limit measure of the free case at coupling g: uniform in t on the ellipse
// z = e^{g + it} + e^{-g - it}.
double ellipse_integral(double g, const TestFunction& f) {
  constexpr int m = 4000;
  double s = 0.0;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / m;
    s += f(std::exp(oracle::cplx(g, t)) + std::exp(oracle::cplx(-g, -t)));
  }
  return s / m;
}

}  // namespace

TEST_CASE("free curve is the ellipse with semi-axes 2cosh g and 2sinh g") {
  const double g = 0.5;
  const auto model = build_curve_model(free_ids(), curve_parameters(free_spec(g)));
  REQUIRE(model.arcs.size() == 1u);
  CHECK(model.sigma.empty());
  const auto& arc = model.arcs[0];
  CHECK(arc.a == doctest::Approx(-2.0 * std::cosh(g)).epsilon(1e-3));
  CHECK(arc.a_prime == doctest::Approx(2.0 * std::cosh(g)).epsilon(1e-3));
  double worst = 0.0;
  for (const auto& p : arc.points) {
    const double r = p.x * p.x / std::pow(2.0 * std::cosh(g), 2) + p.y * p.y / std::pow(2.0 * std::sinh(g), 2);
    worst = std::max(worst, std::abs(r - 1.0));
  }
  CHECK(worst < 5e-3);
  CHECK(model.total_mass() == doctest::Approx(1.0).epsilon(0.01));
  CHECK(model.distance_to_curve({0.0, -2.0 * std::sinh(g)}) < 5e-3);
}

TEST_CASE("density on the free ellipse is uniform in the angle") {
  // rho dl = dt / 2pi, i.e. rho = 1 / (2pi |dz/dt|)
  const double g = 0.5;
  const auto model = build_curve_model(free_ids(), curve_parameters(free_spec(g)));
  for (double t : {0.4, 1.2, 1.9, 2.7}) {
    const oracle::cplx z = std::exp(oracle::cplx(g, t)) + std::exp(oracle::cplx(-g, -t));
    const oracle::cplx dz = oracle::cplx(0, 1) * (std::exp(oracle::cplx(g, t)) - std::exp(oracle::cplx(-g, -t)));
    CHECK(curve_density(free_ids(), z) == doctest::Approx(1.0 / (2.0 * std::numbers::pi * std::abs(dz))).epsilon(0.01));
  }
}

TEST_CASE("limit measure integrals match the ellipse parametrization") {
  const double g = 0.5;
  const auto model = build_curve_model(free_ids(), curve_parameters(free_spec(g)));
  for (const auto& f : {gaussian_bump({1.0, 0.9}, 0.4), gaussian_bump({-2.0, 0.2}, 0.3),
                        polynomial_with_cutoff({0.0, 0.0, 1.0}, 4.0)})
    CHECK(std::abs(limit_measure_integral(model, f) - ellipse_integral(g, f)) < 5e-3);
}

TEST_CASE("zero coupling gives no arcs and all mass on the real line") {
  // random diagonal, so gamma > 0 on the real line and Sigma is the whole support
  EnsembleSpec s = free_spec(0.0);
  s.q = dist::Uniform{-1.0, 1.0};
  const auto ids = estimate_ids(s, 4000, 2);
  const auto model = build_curve_model(ids, curve_parameters(s));
  CHECK(model.arcs.empty());
  CHECK(model.sigma_mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("empirical integral is a plain average") {
  const std::vector<oracle::cplx> z{{0, 0}, {1, 0}};
  CHECK(empirical_integral(z, [](oracle::cplx w) { return w.real(); }) == doctest::Approx(0.5));
}

TEST_CASE("critical couplings order the onsets") {
  EnsembleSpec s = free_spec(0.0);
  s.q = dist::TwoPoint{-1.5, 1.5, 0.5};
  const auto ids = estimate_ids(s, 4000, 2);
  const auto cc = critical_couplings(ids, 0.0);
  CHECK(cc.g1 > 0.0);
  CHECK(cc.g2 > cc.g1);
  auto at = [&](double g) {
    auto t = s;
    t.xi = dist::Constant{-g};
    t.eta = dist::Constant{g};
    return build_curve_model(ids, curve_parameters(t));
  };
  CHECK(at(0.9 * cc.g1).arcs.empty());
  CHECK(!at(1.1 * cc.g1 + 0.02).arcs.empty());
  CHECK(!at(0.9 * cc.g2).sigma.empty());
  CHECK(at(1.1 * cc.g2).sigma.empty());
}

TEST_CASE("curve model json round trip") {
  const auto model = build_curve_model(free_ids(), curve_parameters(free_spec(0.3)));
  const auto back = curve_from_json(to_json(model));
  CHECK(to_json(back) == to_json(model));
}
