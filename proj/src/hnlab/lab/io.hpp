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

// Artifact files: CSV with '# key=value' metadata lines, JSON documents and
// matrix-market exports. Writes go through a temporary file and a rename.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hnlab/operator.hpp"

namespace hnlab::lab {

using Meta = std::vector<std::pair<std::string, std::string>>;

/// Shortest text that round-trips the double.
std::string fmt(double v);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
bool file_exists(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

struct Csv {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// meta lines, then the column header, then rows.
std::string csv_text(const Meta& meta, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);
Csv read_csv(const std::string& path);

std::string matrix_market_dense(const DenseMatrix& m, const Meta& meta);
/// Symmetric coordinate form of a Jacobi matrix (lower triangle).
std::string matrix_market_jacobi(const JacobiMatrix& h, const Meta& meta);

}  // namespace hnlab::lab
