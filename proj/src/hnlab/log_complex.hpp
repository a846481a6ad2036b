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

#include <cmath>
#include <complex>
#include <limits>

namespace hnlab {

using cplx = std::complex<double>;

/// Complex number stored as log-modulus and unit phase. Zero has
/// log_abs = -inf. Products add logs; sums factor out the larger modulus.
struct LogComplex {
  double log_abs = -std::numeric_limits<double>::infinity();
  cplx phase{1.0, 0.0};

  static LogComplex zero() { return {}; }
  static LogComplex one() { return {0.0, {1.0, 0.0}}; }

  static LogComplex from(cplx z) {
    const double r = std::abs(z);
    if (r == 0.0) return zero();
    return {std::log(r), z / r};
  }
  /// sign * exp(log_abs) for a real quantity known only by its logarithm.
  static LogComplex from_log(double log_abs, double sign = 1.0) {
    return {log_abs, {sign < 0.0 ? -1.0 : 1.0, 0.0}};
  }

  bool is_zero() const { return std::isinf(log_abs) && log_abs < 0.0; }
  cplx value() const { return is_zero() ? cplx{} : phase * std::exp(log_abs); }
  double arg() const { return std::arg(phase); }

  LogComplex operator-() const { return {log_abs, -phase}; }
  LogComplex conj() const { return {log_abs, std::conj(phase)}; }

  friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    cplx p = a.phase * b.phase;
    return {a.log_abs + b.log_abs, p / std::abs(p)};
  }
  friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return zero();
    cplx p = a.phase * std::conj(b.phase);
    return {a.log_abs - b.log_abs, p / std::abs(p)};
  }
  friend LogComplex operator+(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double m = std::max(a.log_abs, b.log_abs);
    const cplx s = a.phase * std::exp(a.log_abs - m) + b.phase * std::exp(b.log_abs - m);
    const double r = std::abs(s);
    if (r == 0.0) return zero();
    return {m + std::log(r), s / r};
  }
  friend LogComplex operator-(const LogComplex& a, const LogComplex& b) { return a + (-b); }
};

}  // namespace hnlab
