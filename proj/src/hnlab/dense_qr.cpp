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

// Dense nonsymmetric eigenvalues: balancing, Householder reduction to upper
// Hessenberg form, and the Francis implicit double-shift QR iteration in the
// eigenvalues-only variant (updates confined to the active window). The work
// array is row-major so that both the row and the column updates of a sweep
// run over contiguous memory.

#include <cmath>
#include <sstream>
#include <vector>

#include "hnlab/eig.hpp"
#include "hnlab/error.hpp"

namespace hnlab {
namespace {

class Work {
 public:
  explicit Work(const DenseMatrix& m) : n_(m.rows()), a_(n_ * n_) {
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < n_; ++i) a_[i * n_ + j] = m(i, j);
  }
  std::size_t n() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double* row(std::size_t i) { return a_.data() + i * n_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

void balance(Work& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const std::size_t n = a.n();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        double* ri = a.row(i);
        for (std::size_t j = 0; j < n; ++j) ri[j] *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction. Reflector entries that are exactly zero are skipped,
// so a sparse input (periodic tridiagonal J_n) keeps sparse reflectors and
// the reduction costs far less than the dense n^3.
void reduce_to_hessenberg(Work& a) {
  const std::size_t n = a.n();
  if (n < 3) return;
  std::vector<double> v(n), w(n);
  std::vector<std::size_t> nz;
  nz.reserve(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    nz.clear();
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double x = a(i, k);
      if (x != 0.0 || i == k + 1) nz.push_back(i);
      scale += std::abs(x);
    }
    if (scale == 0.0 || (nz.size() == 1)) continue;
    double sigma = 0.0;
    for (std::size_t i : nz) {
      v[i] = a(i, k) / scale;
      sigma += v[i] * v[i];
    }
    const double norm = std::sqrt(sigma);
    const double alpha = v[k + 1] > 0.0 ? -norm : norm;
    v[k + 1] -= alpha;
    const double vv = sigma - 2.0 * alpha * (v[k + 1] + alpha) + alpha * alpha;
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;

    // Left: rows in nz, columns k+1..
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(k + 1), w.end(), 0.0);
    for (std::size_t i : nz) {
      const double vi = v[i];
      const double* r = a.row(i);
      for (std::size_t j = k + 1; j < n; ++j) w[j] += vi * r[j];
    }
    for (std::size_t i : nz) {
      const double f = beta * v[i];
      double* r = a.row(i);
      for (std::size_t j = k + 1; j < n; ++j) r[j] -= f * w[j];
    }
    for (std::size_t i : nz) a(i, k) = 0.0;
    a(k + 1, k) = alpha * scale;

    // Right: all rows, columns in nz.
    for (std::size_t i = 0; i < n; ++i) {
      double* r = a.row(i);
      double s = 0.0;
      for (std::size_t l : nz) s += r[l] * v[l];
      if (s == 0.0) continue;
      s *= beta;
      for (std::size_t l : nz) r[l] -= s * v[l];
    }
  }
}

double copysign_abs(double mag, double sign) { return sign >= 0.0 ? std::abs(mag) : -std::abs(mag); }

std::vector<cplx> hessenberg_qr(Work& a, const QrOptions& opts, std::size_t& sweeps) {
  const std::size_t n = a.n();
  std::vector<cplx> eig(n);
  sweeps = 0;
  if (n == 0) return eig;

  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) anorm += std::abs(a(i, j));

  const std::size_t max_sweeps = opts.max_sweeps_per_row * n;
  // Signed indices keep the deflation loop readable.
  long nn = static_cast<long>(n) - 1;
  double shift_total = 0.0;
  auto A = [&](long i, long j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  while (nn >= 0) {
    int its = 0;
    long l = 0;
    do {
      // Look for a negligible subdiagonal element.
      for (l = nn; l >= 1; --l) {
        double s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(A(l, l - 1)) + s == s) {
          A(l, l - 1) = 0.0;
          break;
        }
      }
      if (l < 0) l = 0;
      double x = A(nn, nn);
      if (l == nn) {  // one root
        eig[static_cast<std::size_t>(nn)] = {x + shift_total, 0.0};
        --nn;
        continue;
      }
      double y = A(nn - 1, nn - 1);
      double w = A(nn, nn - 1) * A(nn - 1, nn);
      if (l == nn - 1) {  // two roots
        const double p = 0.5 * (y - x);
        const double q = p * p + w;
        double z = std::sqrt(std::abs(q));
        x += shift_total;
        if (q >= 0.0) {
          z = p + copysign_abs(z, p);
          const double r1 = x + z;
          const double r2 = z != 0.0 ? x - w / z : r1;
          eig[static_cast<std::size_t>(nn - 1)] = {r1, 0.0};
          eig[static_cast<std::size_t>(nn)] = {r2, 0.0};
        } else {
          eig[static_cast<std::size_t>(nn - 1)] = {x + p, z};
          eig[static_cast<std::size_t>(nn)] = {x + p, -z};
        }
        nn -= 2;
        continue;
      }

      if (sweeps >= max_sweeps) {
        std::ostringstream os;
        os << "QR iteration did not converge after " << sweeps << " sweeps; active block ["
           << l << ", " << nn << "] of n = " << n;
        throw QrFailure(os.str(), static_cast<std::size_t>(nn), static_cast<std::size_t>(l), sweeps);
      }
      if (its > 0 && its % 10 == 0) {  // exceptional shift
        shift_total += x;
        for (long i = 0; i <= nn; ++i) A(i, i) -= x;
        const double s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;
      ++sweeps;

      // Look for two consecutive small subdiagonal elements.
      long m = nn - 2;
      double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
      for (; m >= l; --m) {
        z = A(m, m);
        r = x - z;
        const double s0 = y - z;
        p = (r * s0 - w) / A(m + 1, m) + A(m, m + 1);
        q = A(m + 1, m + 1) - z - r - s0;
        r = A(m + 2, m + 1);
        const double s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
        if (u + v == v) break;
      }
      for (long i = m + 2; i <= nn; ++i) {
        A(i, i - 2) = 0.0;
        if (i != m + 2) A(i, i - 3) = 0.0;
      }

      // Double-shift sweep on rows/columns l..nn.
      for (long k = m; k <= nn - 1; ++k) {
        if (k != m) {
          p = A(k, k - 1);
          q = A(k + 1, k - 1);
          r = k != nn - 1 ? A(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = copysign_abs(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) A(k, k - 1) = -A(k, k - 1);
        } else {
          A(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        double* rk = a.row(static_cast<std::size_t>(k));
        double* rk1 = a.row(static_cast<std::size_t>(k + 1));
        if (k != nn - 1) {
          double* rk2 = a.row(static_cast<std::size_t>(k + 2));
          for (long j = k; j <= nn; ++j) {
            const double t = rk[j] + q * rk1[j] + r * rk2[j];
            rk2[j] -= t * z;
            rk1[j] -= t * y;
            rk[j] -= t * x;
          }
        } else {
          for (long j = k; j <= nn; ++j) {
            const double t = rk[j] + q * rk1[j];
            rk1[j] -= t * y;
            rk[j] -= t * x;
          }
        }
        const long mmin = nn < k + 3 ? nn : k + 3;
        for (long i = l; i <= mmin; ++i) {
          double* ri = a.row(static_cast<std::size_t>(i));
          double t = x * ri[k] + y * ri[k + 1];
          if (k != nn - 1) {
            t += z * ri[k + 2];
            ri[k + 2] -= t * r;
          }
          ri[k + 1] -= t * q;
          ri[k] -= t;
        }
      }
    } while (l < nn - 1);
  }
  return eig;
}

}  // namespace

std::vector<cplx> dense_eigenvalues(const DenseMatrix& m, const QrOptions& opts,
                                    std::size_t* iterations) {
  if (m.rows() != m.cols()) throw ValidationError("dense_eigenvalues: matrix must be square");
  for (double x : m.data())
    if (!std::isfinite(x)) throw ValidationError("dense_eigenvalues: non-finite entry");
  Work a(m);
  if (opts.balance) balance(a);
  reduce_to_hessenberg(a);
  std::size_t sweeps = 0;
  auto eig = hessenberg_qr(a, opts, sweeps);
  if (iterations) *iterations = sweeps;
  return eig;
}

}  // namespace hnlab
