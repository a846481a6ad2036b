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

#include "hnlab/lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hnlab/eig.hpp"
#include "hnlab/error.hpp"
#include "hnlab/rng.hpp"
#include "hnlab/spectral_stats.hpp"

namespace hnlab::lab {

using nlohmann::json;

namespace {

// Fields of the counter-based generator reserved for verification draws.
constexpr std::uint32_t kFieldRank2 = 0x40;
constexpr std::uint32_t kFieldLemma = 0x41;

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, std::uint32_t field, bool second) {
  const auto w = random_words(seed, stream, index, field);
  return unit_interval(second ? w.second : w.first);
}

// log|det(M)| by LU with partial pivoting on a dense complex copy.
double log_abs_det(const DenseMatrix& m, cplx z) {
  const std::size_t n = m.rows();
  std::vector<cplx> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j) - (i == j ? z : cplx{});
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
    if (a[p * n + k] == cplx{}) return -std::numeric_limits<double>::infinity();
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
    const cplx piv = a[k * n + k];
    acc += std::log(std::abs(piv));
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a[i * n + k] / piv;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return acc;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

Check check_rank2_identity(const EnsembleSpec& spec, std::size_t n, std::size_t reps, std::size_t points,
                           double tol) {
  spec.require_finite_means("verify rank-2 identity");
  double worst = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto b = OperatorBundle::build(sample(spec, n, r));
    const auto dense = b.dense_j();
    const auto [lo, hi] = b.reference().gershgorin();
    for (std::size_t i = 0; i < points; ++i) {
      const double x = lo + (hi - lo) * uniform(spec.seed, r, i, kFieldRank2, false);
      const double u = uniform(spec.seed, r, i, kFieldRank2, true);
      const double y = (u < 0.5 ? -1.0 : 1.0) * (0.05 + 2.0 * std::abs(2.0 * u - 1.0));
      const cplx z(x, y);
      const double lhs = log_abs_det(dense, z);
      const double rhs = rank2_det(b, z).log_abs + log_det_shifted(b.reference(), z).log_abs;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  Check c{"rank-2 determinant identity", worst, tol, worst < tol, ""};
  c.detail = std::to_string(reps) + " realizations x " + std::to_string(points) + " points, n = " + std::to_string(n);
  return c;
}

Check check_lemma_bounds(const EnsembleSpec& spec, std::size_t n, std::size_t samples, double slack) {
  spec.require_finite_means("verify eigenvector bounds");
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto b = OperatorBundle::build(sample(spec, n, s));
    const auto [lo, hi] = b.reference().gershgorin();
    const double x = lo + (hi - lo) * uniform(spec.seed, s, 0, kFieldLemma, false);
    const double y = 0.1 + 1.9 * uniform(spec.seed, s, 0, kFieldLemma, true);
    const cplx z(x, y);
    const double cn = b.c(n), c0 = b.c(0), cn1 = b.c(n - 1);
    const double qn = b.q(n);
    const double beta = std::exp(b.log_beta());
    auto consider = [&](double v, const char* what) {
      if (v < worst) {
        worst = v;
        where = std::string(what) + " at sample " + std::to_string(s);
      }
    };
    for (int boundary = 0; boundary < 2; ++boundary) {
      const double bt = boundary ? beta : 1.0;
      const Mat2 m = boundary ? boundary_matrix(b, z).matrix : transfer_product(b, z, n).matrix;
      const auto ev = transfer_eigenvectors(m);
      consider(-bt * y / cn - ev.u.imag(), boundary ? "Im u_n" : "Im u*");
      consider(bt * std::abs(qn - z) / cn + bt * cn1 * cn1 / (cn * y) - std::abs(ev.u), boundary ? "|u_n|" : "|u*|");
      consider(ev.v.imag(), boundary ? "Im v_n" : "Im v*");
      consider(c0 / y - std::abs(ev.v), boundary ? "|v_n|" : "|v*|");
    }
  }
  Check c{"eigenvector bounds for S_n and B_n S_n", worst, -slack, worst >= -slack, ""};
  c.detail = "smallest slack (" + where + "), " + std::to_string(samples) + " samples, n = " + std::to_string(n);
  return c;
}

Check check_thouless(const EnsembleSpec& spec, const IdsEstimate& ids, std::size_t n, std::size_t reps,
                     const std::vector<cplx>& points, double tol, unsigned jobs) {
  const double mlc = curve_parameters(spec).mean_log_c;
  const auto est = lyapunov_transfer(spec, n, reps, points, jobs);
  double worst = 0.0;
  std::string detail;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double th = lyapunov_thouless(ids, mlc, points[i]);
    const double d = std::abs(est[i].gamma_hat - th);
    worst = std::max(worst, d);
    detail += "z=" + fixed(points[i].real(), 2) + (points[i].imag() < 0 ? "" : "+") + fixed(points[i].imag(), 2) +
              "i transfer " + fixed(est[i].gamma_hat) + " thouless " + fixed(th) + "; ";
  }
  return {"Thouless formula residual", worst, tol, worst < tol, detail};
}

ExclusionRectangles auto_rectangles(const CurveModel& model, double margin) {
  ExclusionRectangles out;
  const auto [slo, shi] = model.ids.support();
  double ymax = 0.0;
  for (const auto& a : model.arcs)
    for (const auto& p : a.points) ymax = std::max(ymax, p.y);
  const double width = shi - slo;
  const double x0 = slo - 0.25 * width, x1 = shi + 0.25 * width;
  const double y1 = ymax > 0.0 ? 1.5 * ymax : 0.25 * width;
  constexpr std::size_t nx = 24, ny = 12, probe = 5;
  const double g = std::abs(model.params.g);
  const ThoulessLyapunov gamma(model.ids, model.params.mean_log_c);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      Rectangle r{x0 + (x1 - x0) * static_cast<double>(i) / nx, x0 + (x1 - x0) * static_cast<double>(i + 1) / nx,
                  y1 * static_cast<double>(j) / ny, y1 * static_cast<double>(j + 1) / ny};
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t a = 0; a < probe; ++a)
        for (std::size_t b = 0; b < probe; ++b) {
          const cplx z(r.re_lo + (r.re_hi - r.re_lo) * static_cast<double>(a) / (probe - 1),
                       r.im_lo + (r.im_hi - r.im_lo) * static_cast<double>(b) / (probe - 1));
          const double v = gamma(z) - g;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      if (j > 0 && lo > margin) out.exterior.push_back(r);
      if (g > 0.0 && hi < -margin) out.interior.push_back(r);
    }
  }
  return out;
}

std::size_t count_in(const std::vector<Rectangle>& rects, const std::vector<cplx>& eigenvalues) {
  std::size_t count = 0;
  for (const auto& z : eigenvalues)
    for (const auto& r : rects)
      if (r.contains(z) || r.contains(std::conj(z))) {
        ++count;
        break;
      }
  return count;
}

std::vector<Bump> default_panel(const CurveModel& model, std::size_t count) {
  std::vector<Bump> out;
  const auto [slo, shi] = model.ids.support();
  const double width = std::max(0.1 * (shi - slo), 0.05);
  double total = model.total_mass();
  const std::size_t on_sigma =
      model.sigma.empty() ? 0
      : model.arcs.empty() ? count
                           : std::min(count - 1, static_cast<std::size_t>(std::llround(count * model.sigma_mass / total)));
  // Centers on Sigma at equal dN-quantiles, on the arcs at equal arc length.
  for (std::size_t i = 0; i < on_sigma; ++i) {
    const double target = model.sigma_mass * (static_cast<double>(i) + 0.5) / static_cast<double>(on_sigma);
    double acc = 0.0;
    for (const auto& iv : model.sigma) {
      const double m = model.ids(iv.hi) - model.ids(iv.lo);
      if (acc + m >= target) {
        // bisect inside the interval for the quantile
        double a = iv.lo, b = iv.hi;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (a + b);
          (acc + model.ids(mid) - model.ids(iv.lo) < target ? a : b) = mid;
        }
        out.push_back({cplx(0.5 * (a + b), 0.0), width});
        break;
      }
      acc += m;
    }
  }
  const std::size_t on_arcs = count - out.size();
  double len = 0.0;
  for (const auto& a : model.arcs) len += a.length();
  for (std::size_t i = 0; i < on_arcs && len > 0.0; ++i) {
    double target = len * (static_cast<double>(i) + 0.5) / static_cast<double>(on_arcs);
    for (const auto& a : model.arcs) {
      const double la = a.length();
      if (target > la) {
        target -= la;
        continue;
      }
      for (std::size_t k = 1; k < a.points.size(); ++k) {
        const auto& p = a.points[k - 1];
        const auto& q = a.points[k];
        const double dl = std::hypot(q.x - p.x, q.y - p.y);
        if (target <= dl || k + 1 == a.points.size()) {
          const double t = dl > 0.0 ? std::min(1.0, target / dl) : 0.0;
          // Alternate halves so both conjugate arcs are exercised.
          const double sign = (i % 2 == 0) ? 1.0 : -1.0;
          out.push_back({cplx(p.x + t * (q.x - p.x), sign * (p.y + t * (q.y - p.y))), width});
          break;
        }
        target -= dl;
      }
      break;
    }
  }
  return out;
}

bool PanelResult::decreasing() const {
  for (std::size_t i = 1; i < max_error.size(); ++i)
    if (!(max_error[i] < max_error[i - 1])) return false;
  return true;
}

RunResult cmd_verify(Context& ctx) {
  const auto& c = ctx.config();
  const auto& v = c.verify;
  c.ensemble.require_finite_means("verify");
  std::vector<Check> checks;

  checks.push_back(check_rank2_identity(c.ensemble, v.rank2_n, v.rank2_reps, v.rank2_points, v.rank2_tol));
  checks.push_back(check_lemma_bounds(c.ensemble, v.lemma_n, v.lemma_samples, v.lemma_slack));

  const auto ids = load_or_estimate_ids(ctx);
  const std::vector<cplx> tpoints =
      v.thouless_points.empty()
          ? std::vector<cplx>{{1.0, 1.0}, {0.5, 0.5}, {2.0, 0.25}, {-1.0, 1.0}, {0.0, 2.0}, {1.5, 1.5}}
          : v.thouless_points;
  checks.push_back(check_thouless(c.ensemble, ids, v.thouless_n, v.thouless_reps, tpoints, v.thouless_tol, ctx.jobs()));

  const auto model = load_or_build_curve(ctx);
  ExclusionRectangles rects{v.exterior, v.interior};
  if (rects.exterior.empty() && rects.interior.empty()) rects = auto_rectangles(model, v.margin);
  const auto spectra = load_or_compute_spectra(ctx, v.exclusion_n, v.exclusion_reps);
  std::size_t in_ext = 0, in_int = 0;
  for (const auto& s : spectra) {
    in_ext += count_in(rects.exterior, s.eigenvalues);
    in_int += count_in(rects.interior, s.eigenvalues);
  }
  const std::string ex_detail = "n = " + std::to_string(v.exclusion_n) + ", " + std::to_string(v.exclusion_reps) +
                                " realizations, margin " + fixed(v.margin, 3);
  checks.push_back({"exclusion: exterior rectangles (" + std::to_string(rects.exterior.size()) + ")",
                    static_cast<double>(in_ext), 0.0, in_ext == 0, ex_detail});
  checks.push_back({"exclusion: interior rectangles (" + std::to_string(rects.interior.size()) + ")",
                    static_cast<double>(in_int), 0.0, in_int == 0, ex_detail});

  PanelResult panel;
  panel.sizes = v.panel_sizes;
  panel.bumps = v.panel.empty() ? default_panel(model) : v.panel;
  std::vector<TestFunction> fs;
  for (const auto& b : panel.bumps) {
    fs.push_back(gaussian_bump(b.center, b.width));
    panel.predicted.push_back(limit_measure_integral(model, fs.back()));
  }
  for (std::size_t n : panel.sizes) {
    const auto sp = load_or_compute_spectra(ctx, n, v.panel_reps);
    std::vector<double> emp(fs.size(), 0.0);
    for (const auto& s : sp)
      for (std::size_t k = 0; k < fs.size(); ++k)
        emp[k] += empirical_integral(s.eigenvalues, fs[k]) / static_cast<double>(sp.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < fs.size(); ++k) worst = std::max(worst, std::abs(emp[k] - panel.predicted[k]));
    panel.empirical.push_back(emp);
    panel.max_error.push_back(worst);
  }
  bool trend = true;
  for (std::size_t i = 1; i < panel.max_error.size(); ++i)
    trend = trend && (panel.max_error[i] < panel.max_error[i - 1] || panel.max_error[i] <= v.panel_floor);
  std::string trend_detail = "max error by n:";
  for (std::size_t i = 0; i < panel.sizes.size(); ++i)
    trend_detail += " " + std::to_string(panel.sizes[i]) + ":" + sci(panel.max_error[i]);
  checks.push_back({"weak convergence: panel error decreasing in n",
                    panel.max_error.empty() ? 0.0 : panel.max_error.back(), v.panel_floor, trend, trend_detail});
  const double mass = model.total_mass();
  checks.push_back({"predicted total mass", mass, v.mass_tol, std::abs(mass - 1.0) <= v.mass_tol,
                    "sigma " + fixed(model.sigma_mass) + " + arcs " + fixed(model.arc_mass)});

  bool ok = true;
  std::ostringstream rep;
  json jchecks = json::array();
  for (const auto& ch : checks) {
    ok = ok && ch.pass;
    rep << (ch.pass ? "PASS  " : "FAIL  ") << ch.name << ": measured " << sci(ch.measured) << ", budget "
        << sci(ch.budget) << "\n      " << ch.detail << "\n";
    jchecks.push_back({{"name", ch.name}, {"measured", ch.measured}, {"budget", ch.budget}, {"pass", ch.pass},
                       {"detail", ch.detail}});
  }
  rep << "\nweak-convergence panel (predicted vs empirical mean over " << v.panel_reps << " realizations)\n";
  rep << "  center                    width    predicted";
  for (auto n : panel.sizes) rep << "   n=" << n;
  rep << "\n";
  json jpanel = json::array();
  for (std::size_t k = 0; k < panel.bumps.size(); ++k) {
    char line[160];
    std::snprintf(line, sizeof line, "  %9.4f%+9.4fi       %6.3f   %9.6f", panel.bumps[k].center.real(),
                  panel.bumps[k].center.imag(), panel.bumps[k].width, panel.predicted[k]);
    rep << line;
    json row = {{"center", {panel.bumps[k].center.real(), panel.bumps[k].center.imag()}},
                {"width", panel.bumps[k].width},
                {"predicted", panel.predicted[k]},
                {"empirical", json::array()},
                {"error", json::array()}};
    for (std::size_t i = 0; i < panel.sizes.size(); ++i) {
      std::snprintf(line, sizeof line, "   %.6f", panel.empirical[i][k]);
      rep << line;
      row["empirical"].push_back(panel.empirical[i][k]);
      row["error"].push_back(panel.empirical[i][k] - panel.predicted[k]);
    }
    rep << "\n";
    jpanel.push_back(row);
  }
  rep << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");

  json j = ctx.meta_json();
  j["checks"] = jchecks;
  j["panel"] = {{"sizes", panel.sizes}, {"max_error", panel.max_error}, {"bumps", jpanel}};
  json jr = json::array();
  for (const auto* rs : {&rects.exterior, &rects.interior}) {
    json a = json::array();
    for (const auto& r : *rs) a.push_back({{"re", {r.re_lo, r.re_hi}}, {"im", {r.im_lo, r.im_hi}}});
    jr.push_back(a);
  }
  j["rectangles"] = {{"exterior", jr[0]}, {"interior", jr[1]}};
  j["pass"] = ok;
  write_json(ctx.path("verify/report.json"), j);
  ctx.record("verify/report.json");
  const std::string text = "# config_hash=" + ctx.hash() + "\n# seed=" + std::to_string(c.ensemble.seed) + "\n" + rep.str();
  write_file(ctx.path("verify/report.txt"), text);
  ctx.record("verify/report.txt");

  return {ok ? 0 : static_cast<int>(ErrorKind::verification), rep.str()};
}

}  // namespace hnlab::lab
