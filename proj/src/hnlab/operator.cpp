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

#include "hnlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hnlab/error.hpp"

namespace hnlab {

namespace {
constexpr double kMaxLog = 300.0;
}

std::array<double, 2> JacobiMatrix::gershgorin() const {
  const std::size_t n = size();
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double r = 0.0;
    if (k > 0) r += std::abs(off[k - 1]);
    if (k + 1 < n) r += std::abs(off[k]);
    const double a = diag[k] - r, b = diag[k] + r;
    if (k == 0 || a < lo) lo = a;
    if (k == 0 || b > hi) hi = b;
  }
  return {lo, hi};
}

DenseMatrix JacobiMatrix::dense() const {
  const std::size_t n = size();
  DenseMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    m(k, k) = diag[k];
    if (k + 1 < n) m(k, k + 1) = m(k + 1, k) = off[k];
  }
  return m;
}

double LogReal::value() const {
  if (log_abs > kMaxLog) {
    std::ostringstream os;
    os << "exponential-scale quantity overflows: log-modulus = " << log_abs;
    throw NumericalError(os.str());
  }
  return sign * std::exp(log_abs);
}

OperatorBundle OperatorBundle::build(const CoefficientSequence& seq) {
  if (seq.raw())
    throw ValidationError("operator: raw-coordinate sequences have no symmetrization");
  if (seq.n < 2) throw ValidationError("operator: n must be >= 2");
  const std::size_t n = seq.n;

  OperatorBundle b;
  b.n_ = n;
  b.stream_ = seq.stream;
  b.xi_ = seq.xi;
  b.eta_ = seq.eta;
  b.q_ = seq.q;
  b.log_c_.resize(n + 1);
  b.c_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    b.log_c_[k] = 0.5 * (seq.xi[k] + seq.eta[k]);
    b.c_[k] = std::exp(b.log_c_[k]);
  }
  b.log_w_.resize(n + 2);
  b.log_w_[0] = 0.0;
  for (std::size_t k = 1; k <= n + 1; ++k)
    b.log_w_[k] = b.log_w_[k - 1] + 0.5 * (seq.xi[k - 1] - seq.eta[k - 1]);
  b.g_hat_ = -b.log_w_[n] / static_cast<double>(n);

  b.h_.diag.assign(seq.q.begin() + 1, seq.q.end());
  b.h_.off.resize(n - 1);
  for (std::size_t k = 1; k < n; ++k) b.h_.off[k - 1] = -b.c_[k];
  return b;
}

DenseMatrix OperatorBundle::dense_j() const {
  DenseMatrix m(n_, n_);
  for (std::size_t k = 1; k <= n_; ++k) m(k - 1, k - 1) = q_[k];
  for (std::size_t k = 1; k < n_; ++k) {
    m(k, k - 1) = -std::exp(xi_[k]);
    m(k - 1, k) = -std::exp(eta_[k]);
  }
  m(0, n_ - 1) += -std::exp(xi_[0]);
  m(n_ - 1, 0) += -std::exp(eta_[n_]);
  return m;
}

DenseMatrix dense_matrix(const CoefficientSequence& seq) {
  if (!seq.raw()) return OperatorBundle::build(seq).dense_j();
  const std::size_t n = seq.n;
  if (n < 2) throw ValidationError("operator: n must be >= 2");
  DenseMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) m(k - 1, k - 1) = seq.q[k];
  for (std::size_t k = 1; k < n; ++k) {
    m(k, k - 1) = seq.xi[k];
    m(k - 1, k) = seq.eta[k];
  }
  m(0, n - 1) += seq.xi[0];
  m(n - 1, 0) += seq.eta[n];
  return m;
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

cplx mat2_det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

double mat2_norm(const Mat2& m) {
  return std::max(std::abs(m[0]) + std::abs(m[2]), std::abs(m[1]) + std::abs(m[3]));
}

Mat2 TransferState::value() const {
  const double s = std::exp(log_scale);
  return {matrix[0] * s, matrix[1] * s, matrix[2] * s, matrix[3] * s};
}

namespace {

// Multiplies [[d, -c_prev], [c_k, 0]] into m from the left (without 1/c_k).
inline void apply_step(Mat2& m, cplx d, double c_prev, double c_k) {
  const cplx r0 = d * m[0] - c_prev * m[2];
  const cplx r1 = d * m[1] - c_prev * m[3];
  m[2] = c_k * m[0];
  m[3] = c_k * m[1];
  m[0] = r0;
  m[1] = r1;
}

inline void renormalize(TransferState& s) {
  const double nrm = mat2_norm(s.matrix);
  if (nrm == 0.0 || !std::isfinite(nrm)) throw NumericalError("transfer product degenerated");
  const double inv = 1.0 / nrm;
  for (auto& x : s.matrix) x *= inv;
  s.log_scale += std::log(nrm);
}

}  // namespace

TransferState transfer_step(const TransferState& state, std::size_t k, cplx z,
                            const OperatorBundle& bundle) {
  if (k < 1 || k > bundle.size()) throw ValidationError("transfer_step: k out of range");
  TransferState s = state;
  apply_step(s.matrix, bundle.q(k) - z, bundle.c(k - 1), bundle.c(k));
  s.log_scale -= bundle.log_c(k);
  renormalize(s);
  ++s.steps;
  return s;
}

TransferState transfer_product(const OperatorBundle& bundle, cplx z, std::size_t k_end) {
  if (k_end > bundle.size()) throw ValidationError("transfer_product: k out of range");
  TransferState s;
  for (std::size_t k = 1; k <= k_end; ++k) {
    apply_step(s.matrix, bundle.q(k) - z, bundle.c(k - 1), bundle.c(k));
    s.log_scale -= bundle.log_c(k);
    renormalize(s);
  }
  s.steps = k_end;
  return s;
}

TransferState boundary_matrix(const OperatorBundle& bundle, cplx z) {
  TransferState s = transfer_product(bundle, z, bundle.size());
  const double beta = std::exp(bundle.log_beta());
  s.matrix[0] *= beta;
  s.matrix[1] *= beta;
  renormalize(s);
  return s;
}

double boundary_condition_residual(const OperatorBundle& bundle, cplx z) {
  const TransferState bs = boundary_matrix(bundle, z);
  const double log_x = -bundle.log_w(bundle.size());
  const double top = std::max(log_x, bs.log_scale);
  const double x = std::exp(log_x - top);
  const double f = std::exp(bs.log_scale - top);
  const Mat2& m = bs.matrix;
  const cplx det = (x - f * m[0]) * (x - f * m[3]) - f * f * m[1] * m[2];
  return std::abs(det);
}

}  // namespace hnlab
