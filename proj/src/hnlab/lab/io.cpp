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

#include "hnlab/lab/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hnlab/error.hpp"

namespace hnlab::lab {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for " + path + ": " + ec.message());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, p, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) { return fs::is_regular_file(path); }

void write_json(const std::string& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
}

std::string csv_text(const Meta& meta, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt(row[i]);
    }
    out += '\n';
  }
  return out;
}

Csv read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  Csv csv;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && line.size() > 2) csv.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header) {
      csv.columns = cells;
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc()) throw IoError("bad number '" + c + "' in " + path);
      row.push_back(v);
    }
    if (row.size() != csv.columns.size()) throw IoError("ragged row in " + path);
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

namespace {

std::string mm_comments(const Meta& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += "% " + k + "=" + v + "\n";
  return out;
}

}  // namespace

std::string matrix_market_dense(const DenseMatrix& m, const Meta& meta) {
  std::string out = "%%MatrixMarket matrix array real general\n" + mm_comments(meta);
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out += fmt(m(i, j)) + "\n";
  return out;
}

std::string matrix_market_jacobi(const JacobiMatrix& h, const Meta& meta) {
  const std::size_t n = h.diag.size();
  std::string out = "%%MatrixMarket matrix coordinate real symmetric\n" + mm_comments(meta);
  out += std::to_string(n) + " " + std::to_string(n) + " " + std::to_string(n + h.off.size()) + "\n";
  for (std::size_t i = 0; i < n; ++i) out += std::to_string(i + 1) + " " + std::to_string(i + 1) + " " + fmt(h.diag[i]) + "\n";
  for (std::size_t i = 0; i < h.off.size(); ++i)
    out += std::to_string(i + 2) + " " + std::to_string(i + 1) + " " + fmt(h.off[i]) + "\n";
  return out;
}

}  // namespace hnlab::lab
