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

#include <cstdint>
#include <string>
#include <vector>

#include "hnlab/error.hpp"
#include "hnlab/log_complex.hpp"
#include "hnlab/operator.hpp"

namespace hnlab {

// ---------------------------------------------------------------------------
// Symmetric tridiagonal (reference) problem

/// Number of eigenvalues strictly below `lambda`, by Sturm sign counts of the
/// LDL^T pivots. Zero pivots are nudged to a tiny positive value.
std::size_t eigencount(const JacobiMatrix& h, double lambda);
std::size_t eigencount(const OperatorBundle& b, double lambda);

/// All eigenvalues, ascending, by bisection on eigencount to an absolute
/// tolerance of 1e-12 * max(1, |H|).
std::vector<double> symmetric_spectrum(const JacobiMatrix& h);
std::vector<double> symmetric_spectrum(const OperatorBundle& b);

/// det(H - z I) via the forward three-term recurrence, in log form.
/// Throws NumericalError when a leading minor vanishes.
LogComplex log_det_shifted(const JacobiMatrix& h, cplx z);

// ---------------------------------------------------------------------------
// Full spectrum of J_n

enum class SpectrumMethod { dense_qr, boundary_det };

struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  std::size_t n = 0;
  std::uint64_t realization = 0;
  SpectrumMethod method = SpectrumMethod::dense_qr;
  /// Largest inverse-iteration residual |(J - z_i I) v_i| / |v_i|.
  double residual = 0.0;
  std::size_t qr_iterations = 0;
};

/// Carries the deflation state of a failed QR run.
struct QrFailure : NumericalError {
  QrFailure(const std::string& what, std::size_t active_hi, std::size_t active_lo,
            std::size_t iterations)
      : NumericalError(what), active_hi(active_hi), active_lo(active_lo), iterations(iterations) {}
  std::size_t active_hi;
  std::size_t active_lo;
  std::size_t iterations;
};

struct QrOptions {
  bool balance = true;
  /// Total implicit double-shift sweeps allowed, as a multiple of n.
  std::size_t max_sweeps_per_row = 30;
};

/// Eigenvalues of a general real square matrix: balancing, Householder
/// Hessenberg reduction, Francis implicit double-shift QR. Never returns a
/// partial spectrum; throws QrFailure instead.
std::vector<cplx> dense_eigenvalues(const DenseMatrix& a, const QrOptions& opts = {},
                                    std::size_t* iterations = nullptr);

SpectrumResult spectrum(const CoefficientSequence& seq, const QrOptions& opts = {});
SpectrumResult spectrum(const OperatorBundle& b, const QrOptions& opts = {});

/// |det(T(z) - I)| / (1 + |T| + |det T|) for the periodic transfer matrix
/// T(z) of the eigenvalue recurrence of J_n; vanishes at eigenvalues.
double characteristic_residual(const CoefficientSequence& seq, cplx z);

/// |(J - zI) v| / |v| after three inverse-iteration steps from a fixed start; the
/// residual reported by `spectrum`.
double inverse_iteration_residual(const CoefficientSequence& seq, cplx z);

/// Greedy matching after sorting by (re, im). Returns the largest distance of
/// a matched pair, or +inf when the sizes differ.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

// ---------------------------------------------------------------------------
// Resolvent corners and the rank-2 determinant

struct ResolventCorners {
  cplx g11;
  cplx gnn;
  /// G_1n = G_n1 = prod_{j=1}^{n-1} c_j / det(H - z I); may be exponentially small.
  LogComplex g1n;
  LogComplex det;  // det(H - z I)
  cplx z;
  std::size_t n = 0;

  cplx g1n_value() const { return g1n.value(); }
  cplx gn1_value() const { return g1n.value(); }
};

/// Throws NumericalError("singular resolvent") when z is an eigenvalue of H.
ResolventCorners resolvent_corners(const JacobiMatrix& h, cplx z);
ResolventCorners resolvent_corners(const OperatorBundle& b, cplx z);

/// Corner entries of the rank-2 perturbation V, as they enter d(z; H, V).
struct CornerPair {
  LogReal a;
  LogReal b;
};

/// d(z; H, V) = (1 + a G_n1)(1 + b G_1n) - a b G_11 G_nn, formed in log space.
LogComplex rank2_det(const JacobiMatrix& h, const CornerPair& corners, cplx z);
LogComplex rank2_det(const OperatorBundle& b, cplx z);

/// log-moduli of the four terms of d = aG_n1 + bG_1n + abG_n1G_1n + (1 - abG_11G_nn).
struct Rank2Terms {
  double log_a_gn1;
  double log_b_g1n;
  double log_ab_g1n_gn1;
  double log_one_minus_ab_g11_gnn;
};
Rank2Terms rank2_terms(const OperatorBundle& b, cplx z);

// ---------------------------------------------------------------------------
// Eigenvectors (u, 1), (v, 1) of 2x2 transfer products (upper half-plane z)

struct TransferEigenvectors {
  cplx u;  // Im u < 0
  cplx v;  // Im v >= 0
};

/// Throws NumericalError if the eigenvectors cannot be normalized to second
/// component 1 or do not split across the real axis.
TransferEigenvectors transfer_eigenvectors(const Mat2& m);

/// Sector C_alpha = {alpha <= arg z <= alpha + pi}, 0 <= alpha <= pi.
bool in_sector(cplx z, double alpha);
/// min over C_alpha of |1 - z|, i.e. sin(alpha).
double sector_distance(double alpha);

}  // namespace hnlab
