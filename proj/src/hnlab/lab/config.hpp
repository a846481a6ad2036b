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

// Experiment configuration (JSON). Field names are listed in README.md.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnlab/curves.hpp"
#include "hnlab/ensemble.hpp"

namespace hnlab::lab {

struct Rectangle {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;

  bool contains(cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
};

struct Bump {
  cplx center;
  double width = 0.1;
};

struct IdsSettings {
  std::size_t n = 4000;
  std::size_t reps = 4;
  std::size_t grid_points = kDefaultIdsGridPoints;
};

struct LyapunovSettings {
  std::size_t n = 100000;
  std::size_t reps = 8;
  std::vector<cplx> points;
};

struct VerifySettings {
  // Exclusion rectangles. When none are given they are placed automatically
  // from the traced curve with the margin below.
  std::vector<Rectangle> exterior;
  std::vector<Rectangle> interior;
  double margin = 0.1;
  std::size_t exclusion_n = 2001;
  std::size_t exclusion_reps = 5;

  double thouless_tol = 0.02;
  std::size_t thouless_n = 100000;
  std::size_t thouless_reps = 8;
  std::vector<cplx> thouless_points;

  std::size_t rank2_n = 30;
  std::size_t rank2_reps = 20;
  std::size_t rank2_points = 10;
  double rank2_tol = 1e-6;

  std::size_t lemma_samples = 100;
  std::size_t lemma_n = 200;
  double lemma_slack = 1e-9;

  std::vector<Bump> panel;  // default: 10 bumps along the curve
  std::vector<std::size_t> panel_sizes{500, 1000, 2000};
  std::size_t panel_reps = 2;
  /// Errors below this level count as converged when judging the trend.
  double panel_floor = 1e-3;
  double mass_tol = 0.02;
};

struct ExperimentConfig {
  EnsembleSpec ensemble;
  std::vector<std::size_t> sizes{201};
  std::size_t reps = 1;
  double imag_tol = 1e-6;
  bool export_matrices = false;
  IdsSettings ids;
  LyapunovSettings lyapunov;
  CurveOptions curve;
  VerifySettings verify;
  std::size_t compare_bins = 20;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of a canonical dump, as 16 hex digits.
std::string hash_text(const std::string& text);
std::string config_hash(const ExperimentConfig& c);
/// Hash of the inputs an IDS estimate depends on (ensemble + ids settings).
std::string ids_hash(const ExperimentConfig& c);

}  // namespace hnlab::lab
