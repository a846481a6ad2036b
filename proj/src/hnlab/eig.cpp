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

#include "hnlab/eig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hnlab/error.hpp"

namespace hnlab {

// ---------------------------------------------------------------------------
// Sturm counts

namespace {

struct SturmData {
  explicit SturmData(const JacobiMatrix& h) : h(h), off2(h.off.size()) {
    double emax = 1.0;
    for (std::size_t k = 0; k < h.off.size(); ++k) {
      off2[k] = h.off[k] * h.off[k];
      emax = std::max(emax, off2[k]);
    }
    pivmin = std::numeric_limits<double>::min() * emax;
  }

  std::size_t count(double lambda) const {
    std::size_t neg = 0;
    double d = 1.0;
    const std::size_t n = h.size();
    for (std::size_t k = 0; k < n; ++k) {
      d = (h.diag[k] - lambda) - (k > 0 ? off2[k - 1] / d : 0.0);
      if (std::abs(d) < pivmin) d = pivmin;
      if (d < 0.0) ++neg;
    }
    return neg;
  }

  const JacobiMatrix& h;
  std::vector<double> off2;
  double pivmin;
};

void bisect(const SturmData& s, double lo, double hi, std::size_t clo, std::size_t chi,
            double tol, std::vector<double>& out) {
  // Eigenvalues with index clo..chi-1 lie in [lo, hi).
  while (chi > clo) {
    if (hi - lo <= tol) {
      const double mid = 0.5 * (lo + hi);
      for (std::size_t i = clo; i < chi; ++i) out[i] = mid;
      return;
    }
    const double mid = 0.5 * (lo + hi);
    const std::size_t cmid = s.count(mid);
    if (cmid == clo) {
      lo = mid;
    } else if (cmid == chi) {
      hi = mid;
    } else {
      bisect(s, lo, mid, clo, cmid, tol, out);
      lo = mid;
      clo = cmid;
    }
  }
}

}  // namespace

std::size_t eigencount(const JacobiMatrix& h, double lambda) { return SturmData(h).count(lambda); }
std::size_t eigencount(const OperatorBundle& b, double lambda) {
  return eigencount(b.reference(), lambda);
}

std::vector<double> symmetric_spectrum(const JacobiMatrix& h) {
  const std::size_t n = h.size();
  if (n == 0) return {};
  const auto [glo, ghi] = h.gershgorin();
  const double scale = std::max({1.0, std::abs(glo), std::abs(ghi)});
  const double tol = 1e-12 * scale;
  // Widen slightly so that the ends are strict enclosures.
  const double lo = glo - tol - 1e-14 * scale;
  const double hi = ghi + tol + 1e-14 * scale;
  SturmData s(h);
  std::vector<double> out(n);
  bisect(s, lo, hi, s.count(lo), s.count(hi), tol, out);
  return out;
}

std::vector<double> symmetric_spectrum(const OperatorBundle& b) {
  return symmetric_spectrum(b.reference());
}

LogComplex log_det_shifted(const JacobiMatrix& h, cplx z) {
  LogComplex det = LogComplex::one();
  cplx r{1.0, 0.0};
  for (std::size_t k = 0; k < h.size(); ++k) {
    r = (h.diag[k] - z) - (k > 0 ? h.off[k - 1] * h.off[k - 1] / r : cplx{});
    if (r == cplx{}) throw NumericalError("singular resolvent: z is an eigenvalue of a leading block of H");
    det = det * LogComplex::from(r);
  }
  return det;
}

// ---------------------------------------------------------------------------
// Spectra of J_n

double characteristic_residual(const CoefficientSequence& seq, cplx z) {
  const std::size_t n = seq.n;
  auto entry = [&](double x) { return seq.raw() ? x : -std::exp(x); };
  Mat2 t{cplx{1.0}, cplx{}, cplx{}, cplx{1.0}};
  double log_scale = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double sub = entry(seq.xi[k - 1]);
    const double sup = entry(seq.eta[k]);
    if (sup == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const cplx a = (z - seq.q[k]) / sup;
    const double b = -sub / sup;
    const cplx r0 = a * t[0] + b * t[2];
    const cplx r1 = a * t[1] + b * t[3];
    t = {r0, r1, t[0], t[1]};
    const double nrm = mat2_norm(t);
    if (nrm == 0.0 || !std::isfinite(nrm)) return std::numeric_limits<double>::quiet_NaN();
    for (auto& x : t) x /= nrm;
    log_scale += std::log(nrm);
  }
  // det(T - I) = det T - tr T + 1 with T = exp(log_scale) * t.
  const LogComplex det = LogComplex::from(mat2_det(t)) * LogComplex::from_log(2.0 * log_scale);
  const LogComplex tr = LogComplex::from(t[0] + t[3]) * LogComplex::from_log(log_scale);
  const LogComplex num = det - tr + LogComplex::one();
  // Scale by |T| rather than |tr T|: at localized eigenvalues tr T ~ 1 while
  // the entries of T, and their rounding errors, are exponentially large.
  const double m = std::max({det.log_abs, log_scale, 0.0});
  const double den = std::exp(det.log_abs - m) + std::exp(log_scale - m) + std::exp(-m);
  return std::exp(num.log_abs - m) / den;
}

namespace {

// Periodic tridiagonal J - zI reordered as 0, n-1, 1, n-2, ... so every
// coupling, corners included, lies within two positions of the diagonal.
// Banded LU with partial pivoting then costs O(n) per shift.
class CyclicShiftedLu {
 public:
  CyclicShiftedLu(const CoefficientSequence& seq, cplx z) : n_(seq.n), pos_(n_), rows_(n_) {
    auto entry = [&](double x) { return seq.raw() ? x : -std::exp(x); };
    for (std::size_t k = 0; k < n_ / 2 + n_ % 2; ++k) pos_[k] = 2 * k;
    for (std::size_t k = 0; k < n_ / 2; ++k) pos_[n_ - 1 - k] = 2 * k + 1;
    double scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t left = (i + n_ - 1) % n_, right = (i + 1) % n_;
      const double l = entry(seq.xi[i]), r = entry(seq.eta[i + 1]);
      add(i, i, cplx(seq.q[i + 1]) - z);
      add(i, left, l);
      add(i, right, r);
      scale = std::max(scale, std::abs(seq.q[i + 1] - z) + std::abs(l) + std::abs(r));
    }
    tiny_ = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    factor();
  }

  // Overwrites b (original ordering) with (J - zI)^{-1} b.
  void solve(std::vector<cplx>& b) const {
    std::vector<cplx> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[pos_[i]] = b[i];
    for (std::size_t j = 0; j < n_; ++j) {
      std::swap(x[j], x[piv_[j]]);
      for (std::size_t i = j + 1; i < std::min(n_, j + 3); ++i) x[i] -= at(i, j) * x[j];
    }
    for (std::size_t j = n_; j-- > 0;) {
      for (std::size_t c = j + 1; c < std::min(n_, j + 5); ++c) x[j] -= at(j, c) * x[c];
      x[j] /= at(j, j);
    }
    for (std::size_t i = 0; i < n_; ++i) b[i] = x[pos_[i]];
  }

 private:
  static constexpr std::size_t kWidth = 7;  // columns p-2 .. p+4 of permuted row p

  cplx& at(std::size_t r, std::size_t c) { return rows_[r][c + 2 - r]; }
  const cplx& at(std::size_t r, std::size_t c) const { return rows_[r][c + 2 - r]; }
  void add(std::size_t i, std::size_t j, cplx v) { at(pos_[i], pos_[j]) += v; }

  void factor() {
    piv_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      std::size_t p = j;
      for (std::size_t i = j + 1; i < std::min(n_, j + 3); ++i)
        if (std::abs(at(i, j)) > std::abs(at(p, j))) p = i;
      piv_[j] = p;
      const std::size_t hi = std::min(n_, j + 5);
      if (p != j)
        for (std::size_t c = j; c < hi; ++c) std::swap(at(j, c), at(p, c));
      if (std::abs(at(j, j)) < tiny_) at(j, j) = tiny_;
      for (std::size_t i = j + 1; i < std::min(n_, j + 3); ++i) {
        const cplx f = at(i, j) / at(j, j);
        at(i, j) = f;
        for (std::size_t c = j + 1; c < hi; ++c) at(i, c) -= f * at(j, c);
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> pos_;
  std::vector<std::array<cplx, kWidth>> rows_;
  std::vector<std::size_t> piv_;
  double tiny_ = 0.0;
};

}  // namespace

double inverse_iteration_residual(const CoefficientSequence& seq, cplx z) {
  const std::size_t n = seq.n;
  if (n < 2) throw ValidationError("inverse_iteration_residual: n must be >= 2");
  const CyclicShiftedLu lu(seq, z);
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(1.0, 0.5 * std::sin(static_cast<double>(i) + 1.0));
  auto normalize = [&] {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    s = std::sqrt(s);
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    for (auto& x : v) x /= s;
    return true;
  };
  for (int it = 0; it < 3; ++it) {
    lu.solve(v);
    if (!normalize()) return std::numeric_limits<double>::quiet_NaN();
  }
  auto entry = [&](double x) { return seq.raw() ? x : -std::exp(x); };
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t left = (i + n - 1) % n, right = (i + 1) % n;
    const cplx r = (seq.q[i + 1] - z) * v[i] + entry(seq.xi[i]) * v[left] + entry(seq.eta[i + 1]) * v[right];
    r2 += std::norm(r);
  }
  return std::sqrt(r2);
}

SpectrumResult spectrum(const CoefficientSequence& seq, const QrOptions& opts) {
  SpectrumResult r;
  r.n = seq.n;
  r.realization = seq.stream;
  r.method = SpectrumMethod::dense_qr;
  r.eigenvalues = dense_eigenvalues(dense_matrix(seq), opts, &r.qr_iterations);
  double worst = 0.0;
  for (const cplx& z : r.eigenvalues) {
    const double res = inverse_iteration_residual(seq, z);
    if (std::isnan(res)) {
      worst = res;
      break;
    }
    worst = std::max(worst, res);
  }
  r.residual = worst;
  return r;
}

SpectrumResult spectrum(const OperatorBundle& b, const QrOptions& opts) {
  CoefficientSequence seq;
  seq.n = b.size();
  seq.stream = b.stream();
  seq.xi.assign(b.xi().begin(), b.xi().end());
  seq.eta.assign(b.eta().begin(), b.eta().end());
  seq.q.resize(seq.n + 1);
  for (std::size_t k = 1; k <= seq.n; ++k) seq.q[k] = b.q(k);
  return spectrum(seq, opts);
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto less = [](const cplx& x, const cplx& y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const cplx& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Resolvent corners

ResolventCorners resolvent_corners(const JacobiMatrix& h, cplx z) {
  const std::size_t n = h.size();
  if (n == 0) throw ValidationError("resolvent_corners: empty matrix");
  ResolventCorners out;
  out.z = z;
  out.n = n;

  // Forward pivots r_k = D_k / D_{k-1} of leading minors, backward pivots
  // s_k = E_k / E_{k+1} of trailing minors. G_nn = 1/r_n, G_11 = 1/s_1.
  cplx r{1.0, 0.0};
  LogComplex det = LogComplex::one();
  for (std::size_t k = 0; k < n; ++k) {
    r = (h.diag[k] - z) - (k > 0 ? h.off[k - 1] * h.off[k - 1] / r : cplx{});
    if (r == cplx{}) throw NumericalError("singular resolvent: z is an eigenvalue of H");
    det = det * LogComplex::from(r);
  }
  cplx s{1.0, 0.0};
  for (std::size_t k = n; k-- > 0;) {
    s = (h.diag[k] - z) - (k + 1 < n ? h.off[k] * h.off[k] / s : cplx{});
    if (s == cplx{}) throw NumericalError("singular resolvent: z is an eigenvalue of H");
  }
  out.gnn = 1.0 / r;
  out.g11 = 1.0 / s;
  out.det = det;

  double log_prod = 0.0;
  for (double e : h.off) log_prod += std::log(std::abs(e));
  out.g1n = LogComplex::from_log(log_prod) / det;
  return out;
}

ResolventCorners resolvent_corners(const OperatorBundle& b, cplx z) {
  return resolvent_corners(b.reference(), z);
}

LogComplex rank2_det(const JacobiMatrix& h, const CornerPair& corners, cplx z) {
  const ResolventCorners g = resolvent_corners(h, z);
  const LogComplex a = LogComplex::from_log(corners.a.log_abs, corners.a.sign);
  const LogComplex b = LogComplex::from_log(corners.b.log_abs, corners.b.sign);
  const LogComplex one = LogComplex::one();
  const LogComplex first = one + a * g.g1n;
  const LogComplex second = one + b * g.g1n;
  const LogComplex cross = a * b * LogComplex::from(g.g11) * LogComplex::from(g.gnn);
  return first * second - cross;
}

LogComplex rank2_det(const OperatorBundle& b, cplx z) {
  return rank2_det(b.reference(), {b.corner_a(), b.corner_b()}, z);
}

Rank2Terms rank2_terms(const OperatorBundle& b, cplx z) {
  const ResolventCorners g = resolvent_corners(b, z);
  const LogReal a = b.corner_a();
  const LogReal bb = b.corner_b();
  const LogComplex la = LogComplex::from_log(a.log_abs, a.sign);
  const LogComplex lb = LogComplex::from_log(bb.log_abs, bb.sign);
  Rank2Terms t;
  t.log_a_gn1 = a.log_abs + g.g1n.log_abs;
  t.log_b_g1n = bb.log_abs + g.g1n.log_abs;
  t.log_ab_g1n_gn1 = a.log_abs + bb.log_abs + 2.0 * g.g1n.log_abs;
  const LogComplex cross = la * lb * LogComplex::from(g.g11) * LogComplex::from(g.gnn);
  t.log_one_minus_ab_g11_gnn = (LogComplex::one() - cross).log_abs;
  return t;
}

// ---------------------------------------------------------------------------
// Transfer-matrix eigenvectors

TransferEigenvectors transfer_eigenvectors(const Mat2& m) {
  const cplx tr = m[0] + m[3];
  const cplx det = mat2_det(m);
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx big = std::abs(tr + disc) >= std::abs(tr - disc) ? 0.5 * (tr + disc) : 0.5 * (tr - disc);
  if (big == cplx{}) throw NumericalError("transfer_eigenvectors: zero matrix");
  const cplx small = det / big;

  auto ratio = [&](cplx mu) {
    // (u, 1) with m10 u + m11 = mu, or equivalently m00 u + m01 = mu u.
    const cplx d1 = m[2];
    const cplx d2 = mu - m[0];
    if (std::abs(d1) >= std::abs(d2)) {
      if (d1 == cplx{}) throw NumericalError("transfer_eigenvectors: eigenvector has zero second component");
      return (mu - m[3]) / d1;
    }
    return m[1] / d2;
  };
  const cplx e1 = ratio(big);
  const cplx e2 = ratio(small);
  TransferEigenvectors out;
  if (e1.imag() < 0.0 && e2.imag() >= 0.0) {
    out = {e1, e2};
  } else if (e2.imag() < 0.0 && e1.imag() >= 0.0) {
    out = {e2, e1};
  } else {
    throw NumericalError("transfer_eigenvectors: eigenvectors do not split across the real axis");
  }
  return out;
}

bool in_sector(cplx z, double alpha) {
  if (z == cplx{}) return true;
  double theta = std::arg(z);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  return theta >= alpha && theta <= alpha + std::numbers::pi;
}

double sector_distance(double alpha) { return std::sin(alpha); }

}  // namespace hnlab
