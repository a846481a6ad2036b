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

#include "hnlab/lab/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hnlab/error.hpp"

namespace hnlab::lab {

using nlohmann::json;

namespace {

// Arc points in traversal order with cumulative length and cumulative mass of
// one conjugate half.
struct ArcTable {
  std::vector<double> x, y, s, m;
  std::vector<bool> joins;  // false where a new arc starts
};

ArcTable arc_table(const CurveModel& model) {
  ArcTable t;
  double s = 0.0, m = 0.0;
  for (const auto& a : model.arcs) {
    for (std::size_t k = 0; k < a.points.size(); ++k) {
      const auto& p = a.points[k];
      if (k > 0) {
        const auto& q = a.points[k - 1];
        const double dl = std::hypot(p.x - q.x, p.y - q.y);
        s += dl;
        m += 0.5 * (p.rho + q.rho) * dl;
      }
      t.x.push_back(p.x);
      t.y.push_back(p.y);
      t.s.push_back(s);
      t.m.push_back(m);
      t.joins.push_back(k > 0);
    }
  }
  return t;
}

// Arc-length coordinate of the point of the table nearest to z (folded to Im >= 0).
double arc_coordinate(const ArcTable& t, cplx z) {
  const double zx = z.real(), zy = std::abs(z.imag());
  double best = std::numeric_limits<double>::infinity(), where = 0.0;
  for (std::size_t k = 1; k < t.x.size(); ++k) {
    if (!t.joins[k]) continue;
    const double dx = t.x[k] - t.x[k - 1], dy = t.y[k] - t.y[k - 1];
    const double l2 = dx * dx + dy * dy;
    double u = l2 > 0.0 ? ((zx - t.x[k - 1]) * dx + (zy - t.y[k - 1]) * dy) / l2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    const double d = std::hypot(zx - t.x[k - 1] - u * dx, zy - t.y[k - 1] - u * dy);
    if (d < best) {
      best = d;
      where = t.s[k - 1] + u * (t.s[k] - t.s[k - 1]);
    }
  }
  return where;
}

double interp_mass(const ArcTable& t, double s) {
  if (t.s.empty()) return 0.0;
  const auto it = std::lower_bound(t.s.begin(), t.s.end(), s);
  if (it == t.s.begin()) return t.m.front();
  if (it == t.s.end()) return t.m.back();
  const std::size_t k = static_cast<std::size_t>(it - t.s.begin());
  const double span = t.s[k] - t.s[k - 1];
  const double u = span > 0.0 ? (s - t.s[k - 1]) / span : 1.0;
  return t.m[k - 1] + u * (t.m[k] - t.m[k - 1]);
}

std::size_t bin_of(const std::vector<double>& edges, double v) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  if (it == edges.begin()) return 0;
  return std::min(static_cast<std::size_t>(it - edges.begin()) - 1, edges.size() - 2);
}

}  // namespace

Histogram arc_length_histogram(const CurveModel& model, const std::vector<cplx>& eigenvalues, std::size_t bins,
                               double imag_tol) {
  Histogram h;
  const ArcTable t = arc_table(model);
  if (t.s.empty() || bins == 0) return h;
  const double len = t.s.back();
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(len * static_cast<double>(b) / static_cast<double>(bins));
  h.predicted.assign(bins, 0.0);
  h.empirical.assign(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b)
    h.predicted[b] = 2.0 * (interp_mass(t, h.edges[b + 1]) - interp_mass(t, h.edges[b]));
  if (eigenvalues.empty()) return h;
  const double w = 1.0 / static_cast<double>(eigenvalues.size());
  for (const auto& z : eigenvalues)
    if (std::abs(z.imag()) > imag_tol) h.empirical[bin_of(h.edges, arc_coordinate(t, z))] += w;
  return h;
}

Histogram real_part_histogram(const CurveModel& model, const std::vector<cplx>& eigenvalues, std::size_t bins,
                              double imag_tol) {
  Histogram h;
  if (model.sigma.empty() || bins == 0) return h;
  const double lo = model.sigma.front().lo, hi = model.sigma.back().hi;
  for (std::size_t b = 0; b <= bins; ++b)
    h.edges.push_back(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins));
  h.predicted.assign(bins, 0.0);
  h.empirical.assign(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b)
    for (const auto& iv : model.sigma) {
      const double a = std::max(iv.lo, h.edges[b]), c = std::min(iv.hi, h.edges[b + 1]);
      if (c > a) h.predicted[b] += model.ids(c) - model.ids(a);
    }
  if (eigenvalues.empty()) return h;
  const double w = 1.0 / static_cast<double>(eigenvalues.size());
  for (const auto& z : eigenvalues)
    if (std::abs(z.imag()) <= imag_tol && z.real() >= lo && z.real() <= hi) h.empirical[bin_of(h.edges, z.real())] += w;
  return h;
}

HausdorffDistances one_sided_hausdorff(const CurveModel& model, const std::vector<cplx>& eigenvalues,
                                       double imag_tol) {
  HausdorffDistances d;
  for (const auto& z : eigenvalues) {
    if (std::abs(z.imag()) <= imag_tol) continue;
    ++d.non_real;
    const double dc = model.distance_to_curve(z);
    d.to_curve = std::max(d.to_curve, dc);
    d.to_curve_or_axis = std::max(d.to_curve_or_axis, std::min(dc, std::abs(z.imag())));
  }
  return d;
}

RunResult cmd_compare(Context& ctx) {
  const auto& c = ctx.config();
  const std::string curve_rel = "curve/curve.json";
  if (file_exists(ctx.path(curve_rel))) {
    const std::string h = read_json(ctx.path(curve_rel)).value("config_hash", "");
    if (h != ctx.hash())
      throw ValidationError("curve/curve.json was written under config hash " + h + ", current config hash is " +
                            ctx.hash());
  }
  const auto model = load_or_build_curve(ctx);

  std::ostringstream rep;
  json jsizes = json::array();
  std::vector<std::vector<double>> rows;
  char line[200];
  rep << "compare: " << model.arcs.size() << " arcs, " << model.sigma.size() << " sigma intervals\n";
  rep << "       n  reps  non-real  real-frac  d(curve)   d(curve|R)  d_R<1e-6\n";
  for (std::size_t n : c.sizes) {
    const auto spectra = load_or_compute_spectra(ctx, n, c.reps);
    std::vector<cplx> all;
    for (const auto& s : spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    const auto d = one_sided_hausdorff(model, all, c.imag_tol);
    std::size_t near_axis = 0;
    for (const auto& z : all)
      if (std::abs(z.imag()) < 1e-6) ++near_axis;
    const double total = static_cast<double>(std::max<std::size_t>(all.size(), 1));
    const double real_frac = 1.0 - static_cast<double>(d.non_real) / total;
    const auto ha = arc_length_histogram(model, all, c.compare_bins, c.imag_tol);
    const auto hr = real_part_histogram(model, all, c.compare_bins, c.imag_tol);
    std::snprintf(line, sizeof line, "  %6zu  %4zu  %8zu  %9.4f  %9.3e  %9.3e  %8.4f\n", n, c.reps, d.non_real,
                  real_frac, d.to_curve, d.to_curve_or_axis, static_cast<double>(near_axis) / total);
    rep << line;
    json jh = {{"arc_length", {{"edges", ha.edges}, {"predicted", ha.predicted}, {"empirical", ha.empirical}}},
               {"real_part", {{"edges", hr.edges}, {"predicted", hr.predicted}, {"empirical", hr.empirical}}}};
    jsizes.push_back({{"n", n},
                      {"reps", c.reps},
                      {"eigenvalues", all.size()},
                      {"non_real", d.non_real},
                      {"real_fraction", real_frac},
                      {"fraction_within_1e-6_of_axis", static_cast<double>(near_axis) / total},
                      {"hausdorff_to_curve", d.to_curve},
                      {"hausdorff_to_curve_or_axis", d.to_curve_or_axis},
                      {"histograms", jh}});
    for (std::size_t b = 0; b + 1 < ha.edges.size(); ++b)
      rows.push_back({static_cast<double>(n), 0.0, ha.edges[b], ha.edges[b + 1], ha.predicted[b], ha.empirical[b]});
    for (std::size_t b = 0; b + 1 < hr.edges.size(); ++b)
      rows.push_back({static_cast<double>(n), 1.0, hr.edges[b], hr.edges[b + 1], hr.predicted[b], hr.empirical[b]});
  }

  json j = ctx.meta_json();
  j["sizes"] = jsizes;
  write_json(ctx.path("compare/report.json"), j);
  ctx.record("compare/report.json");
  write_file(ctx.path("compare/histograms.csv"),
             csv_text(ctx.meta(), {"n", "kind", "lo", "hi", "predicted", "empirical"}, rows));
  ctx.record("compare/histograms.csv");
  rep << "histograms: kind 0 = arc length (both halves), kind 1 = real part on sigma\n";
  return {0, rep.str()};
}

}  // namespace hnlab::lab
