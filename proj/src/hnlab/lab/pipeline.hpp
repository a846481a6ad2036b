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

// Config-driven pipeline: sample -> spectrum -> ids -> curve -> compare, with
// verify and lyapunov on the side. Each stage writes its artifacts under the
// output directory and records them in manifest.json.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnlab/curves.hpp"
#include "hnlab/eig.hpp"
#include "hnlab/lab/config.hpp"
#include "hnlab/lab/io.hpp"

namespace hnlab::lab {

inline constexpr const char* kToolVersion = "hnlab 0.1.0";

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  unsigned jobs = 1;
};

struct RunResult {
  int status = 0;  // 0 ok, else an ErrorKind value
  std::string report;
};

class Context {
 public:
  Context(ExperimentConfig config, std::string out_dir, unsigned jobs);

  const ExperimentConfig& config() const { return config_; }
  const std::string& hash() const { return hash_; }
  unsigned jobs() const { return jobs_; }
  std::string path(const std::string& rel) const;
  /// config_hash and seed, the header every artifact carries.
  Meta meta() const;
  nlohmann::json meta_json() const;

  void record(const std::string& artifact_rel);
  const std::vector<std::string>& artifacts() const { return artifacts_; }

 private:
  ExperimentConfig config_;
  std::string hash_;
  std::string out_;
  unsigned jobs_;
  std::vector<std::string> artifacts_;
};

/// Cached in ids/ids.json under the IDS hash; recomputed only on a miss.
IdsEstimate load_or_estimate_ids(Context& ctx, bool* cache_hit = nullptr);
/// Cached in curve/curve.json; rebuilt when the IDS hash or config hash differ.
CurveModel load_or_build_curve(Context& ctx, bool* cache_hit = nullptr);
/// Spectra for one size, one per rep; read back from spectra/ when present.
/// Throws ValidationError if a present file carries another config hash.
std::vector<SpectrumResult> load_or_compute_spectra(Context& ctx, std::size_t n, std::size_t reps);

std::string spectrum_file(std::size_t n, std::size_t rep);

RunResult run_command(const std::string& command, const RunOptions& opts);

}  // namespace hnlab::lab
