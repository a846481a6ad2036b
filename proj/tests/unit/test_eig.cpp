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

#include <algorithm>
#include <cmath>

#include "hnlab/eig.hpp"
#include "support/oracles.hpp"

using namespace hnlab;

namespace {

EnsembleSpec spec_for(std::uint64_t seed, bool raw) {
  EnsembleSpec s;
  s.seed = seed;
  if (raw) {
    s.coordinates = Coordinates::raw;
    s.xi = dist::Uniform{-0.5, 0.5};
    s.eta = dist::Uniform{-0.5, 0.5};
  } else {
    s.xi = dist::LogUniform{0.0, 1.0};
    s.eta = dist::LogUniform{0.5, 1.5};
  }
  s.q = dist::Uniform{0.0, 1.0};
  return s;
}

}  // namespace

TEST_CASE("Sturm counts against a dense symmetric solver") {
  const auto b = OperatorBundle::build(sample(spec_for(1, false), 60, 0));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::to_eigen(b.reference().dense()));
  const auto ev = es.eigenvalues();
  for (double lambda : {-3.0, -0.5, 0.0, 0.2, 0.77, 1.5, 4.0}) {
    const auto expected = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double e) { return e < lambda; }));
    CHECK(eigencount(b, lambda) == expected);
  }
  const auto sym = symmetric_spectrum(b);
  REQUIRE(sym.size() == 60u);
  for (Eigen::Index i = 0; i < 60; ++i) CHECK(std::abs(sym[i] - ev(i)) < 1e-10);
}

TEST_CASE("log det of H - zI against LU") {
  const auto b = OperatorBundle::build(sample(spec_for(2, false), 40, 0));
  const auto h = oracle::to_eigen(b.reference().dense());
  for (oracle::cplx z : {oracle::cplx(0.5, 0.1), oracle::cplx(-2.0, 0.0), oracle::cplx(1.0, -3.0)})
    CHECK(log_det_shifted(b.reference(), z).log_abs == doctest::Approx(oracle::log_abs_det(h, z)).epsilon(1e-11));
}

TEST_CASE("small spectra equal characteristic polynomial roots") {
  for (std::uint64_t r = 0; r < 12; ++r) {
    const bool raw = r % 3 == 0;
    const std::size_t n = 2 + r % 7;
    const auto seq = sample(spec_for(3, raw), n, r);
    const auto roots = oracle::poly_roots(oracle::characteristic_polynomial(dense_matrix(seq)));
    const auto sp = spectrum(seq);
    CHECK(oracle::match_distance(sp.eigenvalues, roots) < 1e-6);
    CHECK(sp.residual < 1e-10);
  }
}

TEST_CASE("dense spectrum against Eigen at moderate size") {
  const auto seq = sample(spec_for(4, false), 150, 0);
  const auto sp = spectrum(seq);
  const auto ref = oracle::eigenvalues(oracle::periodic_matrix(seq.xi, seq.eta, seq.q));
  CHECK(multiset_distance(sp.eigenvalues, ref) < 1e-8);
  double tr = 0.0, sum_re = 0.0, sum_im = 0.0;
  for (std::size_t k = 1; k <= 150; ++k) tr += seq.q[k];
  for (const auto& z : sp.eigenvalues) {
    sum_re += z.real();
    sum_im += z.imag();
  }
  CHECK(std::abs(sum_re - tr) < 1e-8 * 150);
  CHECK(std::abs(sum_im) < 1e-8 * 150);
}

TEST_CASE("circulant spectra are exact") {
  for (std::size_t n : {4u, 8u, 64u}) {
    EnsembleSpec s;
    s.mode = SamplingMode::constant;
    s.xi = dist::Constant{-0.3};
    s.eta = dist::Constant{0.4};
    s.q = dist::Constant{0.25};
    const auto sp = spectrum(sample(s, n, 0));
    CHECK(oracle::match_distance(sp.eigenvalues, oracle::circulant_spectrum(n, -0.3, 0.4, 0.25)) < 1e-9);
  }
}

TEST_CASE("conjugate pairs and multiset distance") {
  const auto sp = spectrum(sample(spec_for(5, false), 101, 0));
  std::vector<oracle::cplx> conj;
  for (const auto& z : sp.eigenvalues) conj.push_back(std::conj(z));
  CHECK(multiset_distance(sp.eigenvalues, conj) < 1e-9);
  CHECK(std::isinf(multiset_distance({1.0}, {1.0, 2.0})));
}

TEST_CASE("transfer eigenvectors split across the real axis") {
  const auto b = OperatorBundle::build(sample(spec_for(6, false), 80, 0));
  const oracle::cplx z(0.4, 0.6);
  const auto m = transfer_product(b, z, 80).matrix;
  const auto ev = transfer_eigenvectors(m);
  CHECK(ev.u.imag() < 0.0);
  CHECK(ev.v.imag() >= 0.0);
  // (u, 1) and (v, 1) are eigenvectors of m
  for (const auto x : {ev.u, ev.v}) {
    const oracle::cplx a = m[0] * x + m[1], c = m[2] * x + m[3];
    CHECK(std::abs(a - c * x) < 1e-9 * (1.0 + std::abs(x)));
  }
}

TEST_CASE("sectors") {
  CHECK(in_sector({1.0, 1.0}, 0.5));
  CHECK(!in_sector({1.0, -1.0}, 0.5));
  CHECK(sector_distance(0.3) == doctest::Approx(std::sin(0.3)));
}
