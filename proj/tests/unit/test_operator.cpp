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

#include "hnlab/eig.hpp"
#include "hnlab/operator.hpp"
#include "support/oracles.hpp"

using namespace hnlab;

namespace {

EnsembleSpec mixed(std::uint64_t seed) {
  EnsembleSpec s;
  s.xi = dist::Uniform{-1.0, 0.5};
  s.eta = dist::Gaussian{0.2, 0.4};
  s.q = dist::Uniform{-2.0, 2.0};
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("dense J_n matches the coefficient definition") {
  const auto seq = sample(mixed(1), 7, 0);
  const auto j = OperatorBundle::build(seq).dense_j();
  const auto ref = oracle::periodic_matrix(seq.xi, seq.eta, seq.q);
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 7; ++c) CHECK(j(r, c) == doctest::Approx(ref(r, c)).epsilon(1e-13));
}

TEST_CASE("reference matrix is similar to J_n up to the corners") {
  // W^-1 J W - H vanishes away from the two corner entries
  const auto seq = sample(mixed(2), 9, 0);
  const auto b = OperatorBundle::build(seq);
  const auto J = oracle::periodic_matrix(seq.xi, seq.eta, seq.q);
  Eigen::VectorXd w(9);
  for (std::size_t k = 1; k <= 9; ++k) w(k - 1) = b.weight(k);
  const Eigen::MatrixXd s = w.cwiseInverse().asDiagonal() * J * w.asDiagonal();
  const Eigen::MatrixXd h = oracle::to_eigen(b.reference().dense());
  Eigen::MatrixXd d = s - h;
  CHECK(d(0, 8) == doctest::Approx(b.corner_a().value()).epsilon(1e-12));
  CHECK(d(8, 0) == doctest::Approx(b.corner_b().value()).epsilon(1e-12));
  d(0, 8) = 0.0;
  d(8, 0) = 0.0;
  CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t k = 0; k + 1 < 9; ++k) CHECK(h(k, k + 1) < 0.0);
}

TEST_CASE("transfer product reproduces det(H - zI) recursion") {
  // [[det(H_k - z)], [c_k det(H_{k-1} - z)]] up to the c-normalization
  const auto seq = sample(mixed(3), 12, 0);
  const auto b = OperatorBundle::build(seq);
  const oracle::cplx z(0.3, 0.7);
  const auto s = transfer_product(b, z, 12).value();
  const auto h = oracle::to_eigen(b.reference().dense());
  double prod = 1.0;
  for (std::size_t k = 1; k <= 12; ++k) prod *= b.c(k);
  const double log_det = oracle::log_abs_det(h, z);
  CHECK(std::log(std::abs(s[0])) == doctest::Approx(log_det - std::log(prod)).epsilon(1e-10));
  CHECK(std::abs(mat2_det(s)) == doctest::Approx(b.c(0) / b.c(12)).epsilon(1e-10));
}

TEST_CASE("boundary condition vanishes at eigenvalues of J_n") {
  const auto seq = sample(mixed(4), 10, 0);
  const auto b = OperatorBundle::build(seq);
  const auto ev = oracle::eigenvalues(oracle::periodic_matrix(seq.xi, seq.eta, seq.q));
  double worst = 0.0;
  for (const auto& z : ev) worst = std::max(worst, boundary_condition_residual(b, z));
  CHECK(worst < 1e-10);
  // between two neighbouring eigenvalues the residual is far from zero
  CHECK(boundary_condition_residual(b, 0.5 * (ev[0] + ev[1]) + oracle::cplx(0, 0.05)) > 1e3 * worst);
}

TEST_CASE("rank-2 determinant identity against dense LU") {
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto seq = sample(mixed(5), 30, r);
    const auto b = OperatorBundle::build(seq);
    const auto J = oracle::periodic_matrix(seq.xi, seq.eta, seq.q);
    for (oracle::cplx z : {oracle::cplx(0.5, 0.2), oracle::cplx(-1.3, -0.8), oracle::cplx(2.2, 1.5)}) {
      const double lhs = oracle::log_abs_det(J, z);
      const double rhs = rank2_det(b, z).log_abs + log_det_shifted(b.reference(), z).log_abs;
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("resolvent corners against a dense inverse") {
  const auto seq = sample(mixed(6), 15, 0);
  const auto b = OperatorBundle::build(seq);
  const oracle::cplx z(0.4, 0.9);
  const auto h = oracle::to_eigen(b.reference().dense());
  const Eigen::MatrixXcd g =
      (h.cast<oracle::cplx>() - z * Eigen::MatrixXcd::Identity(15, 15)).inverse();
  const auto rc = resolvent_corners(b, z);
  CHECK(std::abs(rc.g11 - g(0, 0)) < 1e-12);
  CHECK(std::abs(rc.gnn - g(14, 14)) < 1e-12);
  CHECK(std::abs(rc.g1n_value() - g(0, 14)) < 1e-12 * std::abs(g(0, 14)) + 1e-15);
  // Herglotz
  CHECK(rc.g11.imag() > 0.0);
}

TEST_CASE("log coordinates reject raw sequences") {
  auto spec = mixed(7);
  spec.coordinates = Coordinates::raw;
  CHECK_THROWS_AS(OperatorBundle::build(sample(spec, 5, 0)), ValidationError);
}
