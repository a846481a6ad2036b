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

#include "hnlab/lab/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hnlab/error.hpp"

namespace hnlab::lab {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(section + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.count(key)) throw ValidationError(section + ": unknown field '" + key + "'");
}

cplx point_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(field + ": expected [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json point_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<cplx> points_from_json(const json& j, const std::string& field) {
  std::vector<cplx> out;
  for (const auto& p : j) out.push_back(point_from_json(p, field));
  return out;
}

json points_to_json(const std::vector<cplx>& zs) {
  json a = json::array();
  for (auto z : zs) a.push_back(point_to_json(z));
  return a;
}

Rectangle rect_from_json(const json& j, const std::string& field) {
  check_keys(j, field, {"re", "im"});
  const auto re = point_from_json(j.at("re"), field + ".re");
  const auto im = point_from_json(j.at("im"), field + ".im");
  return {re.real(), re.imag(), im.real(), im.imag()};
}

json rects_to_json(const std::vector<Rectangle>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back({{"re", {r.re_lo, r.re_hi}}, {"im", {r.im_lo, r.im_hi}}});
  return a;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  ensemble.validate();
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) throw ValidationError(std::string(field) + ": must be positive");
  };
  auto at_least = [](std::size_t v, std::size_t lo, const char* field) {
    if (v < lo) throw ValidationError(std::string(field) + ": must be >= " + std::to_string(lo));
  };
  if (sizes.empty()) throw ValidationError("spectrum.sizes: must not be empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    at_least(sizes[i], 2, "spectrum.sizes");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ValidationError("spectrum.sizes: must be ascending");
  }
  at_least(reps, 1, "spectrum.reps");
  positive(imag_tol, "spectrum.imag_tol");
  at_least(ids.n, 2, "ids.n");
  at_least(ids.reps, 1, "ids.reps");
  at_least(ids.grid_points, 16, "ids.grid_points");
  at_least(lyapunov.n, 1, "lyapunov.n");
  at_least(lyapunov.reps, 1, "lyapunov.reps");
  at_least(curve.x_points, 2, "curve.x_points");
  positive(curve.curve_tol, "curve.curve_tol");
  positive(curve.tie_band, "curve.tie_band");
  at_least(curve.scan_points, 16, "curve.scan_points");
  const auto& v = verify;
  positive(v.margin, "verify.margin");
  positive(v.thouless_tol, "verify.thouless_tol");
  positive(v.rank2_tol, "verify.rank2_tol");
  positive(v.lemma_slack, "verify.lemma_slack");
  positive(v.mass_tol, "verify.mass_tol");
  if (!(v.panel_floor >= 0.0)) throw ValidationError("verify.panel_floor: must be >= 0");
  at_least(v.exclusion_n, 2, "verify.exclusion_n");
  at_least(v.exclusion_reps, 1, "verify.exclusion_reps");
  at_least(v.rank2_n, 2, "verify.rank2_n");
  at_least(v.lemma_n, 2, "verify.lemma_n");
  at_least(v.panel_reps, 1, "verify.panel_reps");
  for (std::size_t i = 0; i < v.panel_sizes.size(); ++i) {
    at_least(v.panel_sizes[i], 2, "verify.panel_sizes");
    if (i > 0 && v.panel_sizes[i] <= v.panel_sizes[i - 1])
      throw ValidationError("verify.panel_sizes: must be ascending");
  }
  for (const auto& b : v.panel) positive(b.width, "verify.panel.width");
  for (const auto* rs : {&v.exterior, &v.interior})
    for (const auto& r : *rs)
      if (!(r.re_lo < r.re_hi && r.im_lo < r.im_hi))
        throw ValidationError("verify rectangles: need re[0] < re[1] and im[0] < im[1]");
  at_least(compare_bins, 1, "compare.bins");
}

ExperimentConfig config_from_json(const json& j) {
  try {
    check_keys(j, "config", {"ensemble", "spectrum", "ids", "lyapunov", "curve", "verify", "compare"});
    ExperimentConfig c;
    c.ensemble = ensemble_from_json(j.at("ensemble"));
    if (j.contains("spectrum")) {
      const auto& s = j["spectrum"];
      check_keys(s, "spectrum", {"sizes", "reps", "imag_tol", "export_matrices"});
      read(s, "sizes", c.sizes);
      read(s, "reps", c.reps);
      read(s, "imag_tol", c.imag_tol);
      read(s, "export_matrices", c.export_matrices);
    }
    if (j.contains("ids")) {
      const auto& s = j["ids"];
      check_keys(s, "ids", {"n", "reps", "grid_points"});
      read(s, "n", c.ids.n);
      read(s, "reps", c.ids.reps);
      read(s, "grid_points", c.ids.grid_points);
    }
    if (j.contains("lyapunov")) {
      const auto& s = j["lyapunov"];
      check_keys(s, "lyapunov", {"n", "reps", "points"});
      read(s, "n", c.lyapunov.n);
      read(s, "reps", c.lyapunov.reps);
      if (s.contains("points")) c.lyapunov.points = points_from_json(s["points"], "lyapunov.points");
    }
    if (j.contains("curve")) {
      const auto& s = j["curve"];
      check_keys(s, "curve", {"x_points", "curve_tol", "tie_band", "scan_points"});
      read(s, "x_points", c.curve.x_points);
      read(s, "curve_tol", c.curve.curve_tol);
      read(s, "tie_band", c.curve.tie_band);
      read(s, "scan_points", c.curve.scan_points);
    }
    if (j.contains("verify")) {
      const auto& s = j["verify"];
      check_keys(s, "verify",
                 {"exterior", "interior", "margin", "exclusion_n", "exclusion_reps", "thouless_tol",
                  "thouless_n", "thouless_reps", "thouless_points", "rank2_n", "rank2_reps",
                  "rank2_points", "rank2_tol", "lemma_samples", "lemma_n", "lemma_slack", "panel",
                  "panel_sizes", "panel_reps", "panel_floor", "mass_tol"});
      auto& v = c.verify;
      if (s.contains("exterior"))
        for (const auto& r : s["exterior"]) v.exterior.push_back(rect_from_json(r, "verify.exterior"));
      if (s.contains("interior"))
        for (const auto& r : s["interior"]) v.interior.push_back(rect_from_json(r, "verify.interior"));
      read(s, "margin", v.margin);
      read(s, "exclusion_n", v.exclusion_n);
      read(s, "exclusion_reps", v.exclusion_reps);
      read(s, "thouless_tol", v.thouless_tol);
      read(s, "thouless_n", v.thouless_n);
      read(s, "thouless_reps", v.thouless_reps);
      if (s.contains("thouless_points"))
        v.thouless_points = points_from_json(s["thouless_points"], "verify.thouless_points");
      read(s, "rank2_n", v.rank2_n);
      read(s, "rank2_reps", v.rank2_reps);
      read(s, "rank2_points", v.rank2_points);
      read(s, "rank2_tol", v.rank2_tol);
      read(s, "lemma_samples", v.lemma_samples);
      read(s, "lemma_n", v.lemma_n);
      read(s, "lemma_slack", v.lemma_slack);
      if (s.contains("panel")) {
        for (const auto& b : s["panel"]) {
          check_keys(b, "verify.panel", {"center", "width"});
          v.panel.push_back({point_from_json(b.at("center"), "verify.panel.center"), b.at("width").get<double>()});
        }
      }
      read(s, "panel_sizes", v.panel_sizes);
      read(s, "panel_reps", v.panel_reps);
      read(s, "panel_floor", v.panel_floor);
      read(s, "mass_tol", v.mass_tol);
    }
    if (j.contains("compare")) {
      const auto& s = j["compare"];
      check_keys(s, "compare", {"bins"});
      read(s, "bins", c.compare_bins);
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  const auto& v = c.verify;
  json panel = json::array();
  for (const auto& b : v.panel) panel.push_back({{"center", point_to_json(b.center)}, {"width", b.width}});
  return {
      {"ensemble", to_json(c.ensemble)},
      {"spectrum",
       {{"sizes", c.sizes}, {"reps", c.reps}, {"imag_tol", c.imag_tol}, {"export_matrices", c.export_matrices}}},
      {"ids", {{"n", c.ids.n}, {"reps", c.ids.reps}, {"grid_points", c.ids.grid_points}}},
      {"lyapunov",
       {{"n", c.lyapunov.n}, {"reps", c.lyapunov.reps}, {"points", points_to_json(c.lyapunov.points)}}},
      {"curve",
       {{"x_points", c.curve.x_points},
        {"curve_tol", c.curve.curve_tol},
        {"tie_band", c.curve.tie_band},
        {"scan_points", c.curve.scan_points}}},
      {"verify",
       {{"exterior", rects_to_json(v.exterior)},
        {"interior", rects_to_json(v.interior)},
        {"margin", v.margin},
        {"exclusion_n", v.exclusion_n},
        {"exclusion_reps", v.exclusion_reps},
        {"thouless_tol", v.thouless_tol},
        {"thouless_n", v.thouless_n},
        {"thouless_reps", v.thouless_reps},
        {"thouless_points", points_to_json(v.thouless_points)},
        {"rank2_n", v.rank2_n},
        {"rank2_reps", v.rank2_reps},
        {"rank2_points", v.rank2_points},
        {"rank2_tol", v.rank2_tol},
        {"lemma_samples", v.lemma_samples},
        {"lemma_n", v.lemma_n},
        {"lemma_slack", v.lemma_slack},
        {"panel", std::move(panel)},
        {"panel_sizes", v.panel_sizes},
        {"panel_reps", v.panel_reps},
        {"panel_floor", v.panel_floor},
        {"mass_tol", v.mass_tol}}},
      {"compare", {{"bins", c.compare_bins}}},
  };
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::string hash_text(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& c) { return hash_text(to_json(c).dump()); }

std::string ids_hash(const ExperimentConfig& c) {
  const json j = {{"ensemble", to_json(c.ensemble)},
                  {"ids", {{"n", c.ids.n}, {"reps", c.ids.reps}, {"grid_points", c.ids.grid_points}}}};
  return hash_text(j.dump());
}

}  // namespace hnlab::lab
