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

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code; inputs are built from plain coefficient
// arrays or DenseMatrix entries only.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hnlab/operator.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Poly = std::vector<cplx>;  // coefficients, lowest degree first

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline void poly_axpy(Poly& acc, cplx s, const Poly& p) {
  if (acc.size() < p.size()) acc.resize(p.size(), cplx{});
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
}

// det(A - zI) by Laplace expansion along the first row of the remaining
// rows/columns, entries being polynomials in z.
inline Poly cofactor_det(const std::vector<std::vector<Poly>>& m, std::vector<std::size_t> rows,
                         std::vector<std::size_t> cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  const std::size_t r = rows[0];
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  Poly acc{cplx{}};
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Poly& e = m[r][cols[k]];
    if (std::all_of(e.begin(), e.end(), [](cplx c) { return c == cplx{}; })) continue;
    std::vector<std::size_t> sub_cols = cols;
    sub_cols.erase(sub_cols.begin() + static_cast<long>(k));
    poly_axpy(acc, (k % 2 == 0) ? 1.0 : -1.0, poly_mul(e, cofactor_det(m, sub_rows, sub_cols)));
  }
  return acc;
}

inline Poly characteristic_polynomial(const hnlab::DenseMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j) ? Poly{a(i, j), -1.0} : Poly{a(i, j)};
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return cofactor_det(m, idx, idx);
}

inline cplx poly_eval(const Poly& p, cplx z) {
  cplx r{};
  for (std::size_t i = p.size(); i-- > 0;) r = r * z + p[i];
  return r;
}

// Durand-Kerner iteration followed by Newton polishing.
inline std::vector<cplx> poly_roots(Poly p) {
  while (p.size() > 1 && p.back() == cplx{}) p.pop_back();
  const std::size_t d = p.size() - 1;
  const cplx lead = p.back();
  for (auto& c : p) c /= lead;
  double radius = 0.0;
  for (std::size_t i = 0; i < d; ++i) radius = std::max(radius, std::abs(p[i]));
  radius += 1.0;
  std::vector<cplx> z(d);
  for (std::size_t k = 0; k < d; ++k) z[k] = radius * std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.25) / d);
  for (int it = 0; it < 2000; ++it) {
    double change = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      cplx den{1.0};
      for (std::size_t j = 0; j < d; ++j)
        if (j != k) den *= z[k] - z[j];
      const cplx step = poly_eval(p, z[k]) / den;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  Poly dp(d);
  for (std::size_t i = 1; i <= d; ++i) dp[i - 1] = static_cast<double>(i) * p[i];
  for (auto& r : z)
    for (int it = 0; it < 3; ++it) {
      const cplx der = poly_eval(dp, r);
      if (std::abs(der) == 0.0) break;
      const cplx step = poly_eval(p, r) / der;
      if (!(std::abs(step) < 1e-6)) break;
      r -= step;
    }
  return z;
}

inline Eigen::MatrixXd to_eigen(const hnlab::DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

/// Dense periodic tridiagonal matrix from coefficient arrays in log
/// coordinates: diagonal q_k, sub-diagonal -e^{xi_k}, super-diagonal -e^{eta_k}
/// for k = 1..n, corners -e^{xi_0} (row 1, col n) and -e^{eta_n} (row n, col 1).
inline Eigen::MatrixXd periodic_matrix(const std::vector<double>& xi, const std::vector<double>& eta,
                                       const std::vector<double>& q) {
  const std::size_t n = q.size() - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 1; k <= n; ++k) m(k - 1, k - 1) = q[k];
  for (std::size_t k = 1; k < n; ++k) {
    m(k, k - 1) = -std::exp(xi[k]);
    m(k - 1, k) = -std::exp(eta[k]);
  }
  m(0, n - 1) += -std::exp(xi[0]);
  m(n - 1, 0) += -std::exp(eta[n]);
  return m;
}

inline double log_abs_det(const Eigen::MatrixXd& a, cplx z) {
  const Eigen::MatrixXcd m =
      a.cast<cplx>() - z * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::abs(lu.matrixLU()(i, i)));
  return s;
}

inline std::vector<cplx> eigenvalues(const Eigen::MatrixXd& a) {
  const Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  const auto ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Largest distance under an optimal-ish matching: greedy on the closest
/// remaining pair, which is exact for well separated sets.
inline double match_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = INFINITY;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (std::abs(a[i] - b[j]) < best) {
          best = std::abs(a[i] - b[j]);
          bi = i;
          bj = j;
        }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<long>(bi));
    b.erase(b.begin() + static_cast<long>(bj));
  }
  return worst;
}

// ---- free case: arcsine law on [-2, 2] ----

inline double arcsine_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + std::asin(x / 2.0) / std::numbers::pi;
}

/// sqrt(z^2 - 4) with the branch ~ z at infinity, cut on [-2, 2].
inline cplx free_root(cplx z) { return std::sqrt(z - 2.0) * std::sqrt(z + 2.0); }

/// int log|z - l| dN(l) = log|(z + sqrt(z^2 - 4)) / 2|.
inline double free_log_potential(cplx z) { return std::log(std::abs((z + free_root(z)) / 2.0)); }

/// int dN(l) / (l - z) = -1 / sqrt(z^2 - 4).
inline cplx free_stieltjes(cplx z) { return -1.0 / free_root(z); }

/// Diagonal resolvent entry of the half-line free Jacobi operator.
inline cplx half_line_g11(cplx z) { return (-z + free_root(z)) / 2.0; }

/// Eigenvalues of the constant-coefficient periodic matrix.
inline std::vector<cplx> circulant_spectrum(std::size_t n, double xi, double eta, double q) {
  std::vector<cplx> out;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    out.push_back(q - std::exp(eta) * w - std::exp(xi) / w);
  }
  return out;
}

/// E log u for u ~ Uni[a, b], 0 <= a < b.
inline double mean_log_uniform(double a, double b) {
  auto f = [](double u) { return u > 0.0 ? u * std::log(u) - u : 0.0; };
  return (f(b) - f(a)) / (b - a);
}

}  // namespace oracle
