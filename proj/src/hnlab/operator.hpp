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

// Matrix objects built from one coefficient realization.
//
// Index table (1-based rows/columns j, k = 1..n; arrays 0..n):
//
//   J[k][k]     = q[k]              k = 1..n
//   J[k+1][k]   = -exp(xi[k])       k = 1..n-1   (sub-diagonal)
//   J[k][k+1]   = -exp(eta[k])      k = 1..n-1   (super-diagonal)
//   J[1][n]     = -exp(xi[0])                    (top-right corner)
//   J[n][1]     = -exp(eta[n])                   (bottom-left corner)
//
//   w[0] = 1,  w[k] = exp(1/2 sum_{j<k} (xi[j] - eta[j])),   k = 1..n+1
//   c[k] = exp(1/2 (xi[k] + eta[k])),                        k = 0..n
//   H = tridiag(-c[k]; q[k]) (Dirichlet), V has a_n at (1,n), b_n at (n,1)
//   a_n = -c[0] w[n],  b_n = -c[n] w[1] / w[n+1],  beta_n = w[n+1] / (w[1] w[n])
//
// so that W^{-1} J W = H + V with W = diag(w[1..n]). Dense matrices use
// 0-based storage, so J[j][k] above lives at dense(j-1, k-1).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hnlab/ensemble.hpp"
#include "hnlab/log_complex.hpp"

namespace hnlab {

/// Column-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Real symmetric tridiagonal matrix: diag[0..n-1], off[0..n-2] where off[k]
/// sits at (k, k+1) and (k+1, k).
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  /// Gershgorin enclosure [lo, hi] of the spectrum.
  std::array<double, 2> gershgorin() const;
  DenseMatrix dense() const;
};

/// Real quantity known through sign and logarithm of its modulus.
struct LogReal {
  double log_abs = 0.0;
  double sign = 1.0;
  /// Throws NumericalError (carrying log_abs) when exp would overflow.
  double value() const;
};

class OperatorBundle {
 public:
  /// Requires log coordinates and n >= 2.
  static OperatorBundle build(const CoefficientSequence& seq);

  std::size_t size() const noexcept { return n_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// q_k, k = 1..n (q(0) is not part of J_n).
  double q(std::size_t k) const { return q_[k]; }
  double log_c(std::size_t k) const { return log_c_[k]; }
  double c(std::size_t k) const { return c_[k]; }
  /// log w_k, k = 0..n+1.
  double log_w(std::size_t k) const { return log_w_[k]; }
  double weight(std::size_t k) const { return LogReal{log_w_[k], 1.0}.value(); }

  LogReal corner_a() const { return {log_c_[0] + log_w_[n_], -1.0}; }
  LogReal corner_b() const { return {log_c_[n_] + log_w_[1] - log_w_[n_ + 1], -1.0}; }
  double log_beta() const { return log_w_[n_ + 1] - log_w_[1] - log_w_[n_]; }
  /// 1/2 mean(eta - xi) over indices 0..n-1; equals -log(w_n)/n.
  double g_hat() const { return g_hat_; }

  const JacobiMatrix& reference() const noexcept { return h_; }
  std::span<const double> xi() const noexcept { return xi_; }
  std::span<const double> eta() const noexcept { return eta_; }

  DenseMatrix dense_j() const;

 private:
  std::size_t n_ = 0;
  std::uint64_t stream_ = 0;
  std::vector<double> xi_, eta_, q_, log_c_, c_, log_w_;
  JacobiMatrix h_;
  double g_hat_ = 0.0;
};

/// Dense J_n for either coordinate system (raw mode uses xi/eta as entries).
DenseMatrix dense_matrix(const CoefficientSequence& seq);

using Mat2 = std::array<cplx, 4>;  // row-major 2x2

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
cplx mat2_det(const Mat2& m);
/// Column-sum norm max_k sum_j |M_jk|.
double mat2_norm(const Mat2& m);

/// Ordered product of one-step transfer matrices, kept as
/// exp(log_scale) * matrix with the stored matrix renormalized to unit norm.
struct TransferState {
  Mat2 matrix{cplx{1.0}, cplx{}, cplx{}, cplx{1.0}};
  double log_scale = 0.0;
  std::size_t steps = 0;

  Mat2 value() const;
};

/// Left-multiplies by A_k = (1/c_k) [[q_k - z, -c_{k-1}], [c_k, 0]], 1 <= k <= n.
TransferState transfer_step(const TransferState& state, std::size_t k, cplx z,
                            const OperatorBundle& bundle);
/// S_k(z) = A_k ... A_1.
TransferState transfer_product(const OperatorBundle& bundle, cplx z, std::size_t k);

/// B_n S_n(z) with B_n = diag(beta_n, 1), in the same scaled form.
TransferState boundary_matrix(const OperatorBundle& bundle, cplx z);

/// |det(I/w_n - B_n S_n(z))| after dividing both terms by the larger of 1/w_n
/// and the scale of B_n S_n; zero exactly at eigenvalues of J_n.
double boundary_condition_residual(const OperatorBundle& bundle, cplx z);

}  // namespace hnlab
