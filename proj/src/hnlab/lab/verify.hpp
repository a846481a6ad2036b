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

// Invariant battery behind `hnlab verify`. Every check reports the measured
// value next to its budget.

#include <string>
#include <vector>

#include "hnlab/curves.hpp"
#include "hnlab/lab/config.hpp"
#include "hnlab/lab/pipeline.hpp"

namespace hnlab::lab {

struct Check {
  std::string name;
  double measured = 0.0;
  double budget = 0.0;
  bool pass = false;
  std::string detail;
};

/// max |log|det(J - zI)| - log|d| - log|det(H - zI)|| with det(J - zI) from a
/// dense LU factorization, over `reps` realizations and `points` random non-real z.
Check check_rank2_identity(const EnsembleSpec& spec, std::size_t n, std::size_t reps,
                           std::size_t points, double tol);

/// Smallest slack of the eigenvector bounds for S_n(z) and B_n S_n(z) over
/// `samples` random (realization, z) pairs with Im z in [0.1, 2].
Check check_lemma_bounds(const EnsembleSpec& spec, std::size_t n, std::size_t samples, double slack);

/// max |gamma_transfer - gamma_thouless| over the points.
Check check_thouless(const EnsembleSpec& spec, const IdsEstimate& ids, std::size_t n, std::size_t reps,
                     const std::vector<cplx>& points, double tol, unsigned jobs);

/// Grid cells of the upper half-plane on which gamma - |g| > margin (exterior,
/// away from the real axis) or |g| - gamma > margin (interior, the bottom row
/// touching the real axis).
struct ExclusionRectangles {
  std::vector<Rectangle> exterior;
  std::vector<Rectangle> interior;
};
ExclusionRectangles auto_rectangles(const CurveModel& model, double margin);

/// Eigenvalues z with z or conj(z) inside one of the rectangles.
std::size_t count_in(const std::vector<Rectangle>& rects, const std::vector<cplx>& eigenvalues);

std::vector<Bump> default_panel(const CurveModel& model, std::size_t count = 10);

struct PanelResult {
  std::vector<std::size_t> sizes;
  std::vector<Bump> bumps;
  std::vector<double> predicted;               // per bump
  std::vector<std::vector<double>> empirical;  // [size][bump]
  std::vector<double> max_error;               // per size
  bool decreasing() const;
};

RunResult cmd_verify(Context& ctx);

}  // namespace hnlab::lab
