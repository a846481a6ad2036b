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

// `hnlab compare`: empirical spectra against the predicted limit measure.

#include <vector>

#include "hnlab/curves.hpp"
#include "hnlab/lab/pipeline.hpp"

namespace hnlab::lab {

struct Histogram {
  std::vector<double> edges;      // bins + 1
  std::vector<double> predicted;  // mass per bin
  std::vector<double> empirical;  // fraction of eigenvalues per bin
};

/// Bins of equal arc length over all arcs (both conjugate halves pooled).
/// Non-real eigenvalues are assigned to the bin of their nearest arc point.
Histogram arc_length_histogram(const CurveModel& model, const std::vector<cplx>& eigenvalues,
                               std::size_t bins, double imag_tol);
/// Bins over the hull of Sigma; predicted mass is dN restricted to Sigma.
Histogram real_part_histogram(const CurveModel& model, const std::vector<cplx>& eigenvalues,
                              std::size_t bins, double imag_tol);

/// Largest distance from a non-real eigenvalue to the curve (and to curve or
/// real axis). Zero when there are no non-real eigenvalues.
struct HausdorffDistances {
  double to_curve = 0.0;
  double to_curve_or_axis = 0.0;
  std::size_t non_real = 0;
};
HausdorffDistances one_sided_hausdorff(const CurveModel& model, const std::vector<cplx>& eigenvalues,
                                       double imag_tol);

RunResult cmd_compare(Context& ctx);

}  // namespace hnlab::lab
