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

#include "hnlab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hnlab/error.hpp"

namespace hnlab {

double coupling_g(const EnsembleSpec& spec) {
  spec.require_finite_means("coupling_g");
  const auto m = ensemble_moments(spec);
  return 0.5 * (m.mean_eta - m.mean_xi);
}

CurveParameters curve_parameters(const EnsembleSpec& spec) {
  spec.require_finite_means("curve_parameters");
  const auto m = ensemble_moments(spec);
  CurveParameters p;
  p.g = 0.5 * (m.mean_eta - m.mean_xi);
  p.mean_log_c = 0.5 * (m.mean_xi + m.mean_eta);
  p.threshold = std::max(m.mean_xi, m.mean_eta);
  return p;
}

double Arc::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    len += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  return len;
}

double Arc::mass() const {
  double m = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dl = std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
    m += 0.5 * (points[i].rho + points[i - 1].rho) * dl;
  }
  return m;
}

namespace {

double segment_distance(double px, double py, const ArcPoint& a, const ArcPoint& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.x + t * dx), py - (a.y + t * dy));
}

}  // namespace

double CurveModel::distance_to_curve(cplx z) const {
  // For z and w in the upper half-plane |z - w| <= |z - conj(w)|, so folding z
  // up is enough to measure against both halves.
  const double px = z.real(), py = std::abs(z.imag());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : arcs) {
    if (arc.points.size() == 1) best = std::min(best, std::hypot(px - arc.points[0].x, py - arc.points[0].y));
    for (std::size_t i = 1; i < arc.points.size(); ++i)
      best = std::min(best, segment_distance(px, py, arc.points[i - 1], arc.points[i]));
  }
  return best;
}

double curve_density(const IdsEstimate& ids, cplx z) {
  return std::abs(stieltjes(ids, z)) / (2.0 * std::numbers::pi);
}

namespace {

// Root of f on [a, b] with f(a), f(b) of opposite sign (Illinois variant of
// regula falsi, falling back to bisection when it stalls).
template <class F>
double illinois(const F& f, double a, double b, double fa, double fb, double ftol, double xtol,
                int max_iter = 200) {
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(b - a) <= xtol) break;
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
    const double fc = f(c);
    if (std::abs(fc) <= ftol) return c;
    if ((fc < 0.0) == (fb < 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

template <class F>
double golden_min(const F& f, double a, double b, int iters = 80) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

CurveModel trace_curve(const IdsEstimate& ids, const CurveParameters& params,
                       const CurveOptions& opts) {
  if (ids.cells() == 0) throw ValidationError("trace_curve: empty IDS estimate");
  if (opts.x_points < 2) throw ValidationError("trace_curve: x_points must be >= 2");
  if (!(opts.curve_tol > 0.0)) throw ValidationError("trace_curve: curve_tol must be positive");
  if (opts.scan_points < 16) throw ValidationError("trace_curve: scan_points must be >= 16");

  CurveModel model;
  model.params = params;
  model.ids = ids;
  const double g = std::abs(params.g);
  if (g == 0.0) return model;

  const double level = params.mean_log_c + g;
  const ThoulessLyapunov gamma(ids, params.mean_log_c);
  auto f = [&](cplx z) { return gamma(z) - g; };
  auto fx = [&](double x) { return f(cplx(x, 0.0)); };

  // Phi(x) >= log dist(x, supp dN), so gamma(x) <= |g| forces x within e^level of the support.
  const auto [slo, shi] = ids.support();
  const double reach = std::exp(level);
  const double lo = slo - reach, hi = shi + reach;
  const std::size_t m = opts.scan_points;
  std::vector<double> xs(m), fs(m);
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(m - 1);
    fs[j] = fx(xs[j]);
  }
  const double xtol = 1e-14 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  auto refine = [&](std::size_t j) {
    const double r = illinois(fx, xs[j], xs[j + 1], fs[j], fs[j + 1], 0.0, xtol);
    const double res = std::abs(fx(r));
    if (res > opts.curve_tol)
      model.warnings.push_back("endpoint refinement near x=" + fmt(r) +
                               " reached |gamma-|g||=" + fmt(res) + "; IDS grid too coarse");
    return r;
  };

  std::vector<Interval> intervals;
  bool inside = fs[0] < 0.0;
  double start = xs[0];
  if (inside) model.warnings.push_back("real-axis scan starts inside the curve");
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const bool next = fs[j + 1] < 0.0;
    if (next == inside) continue;
    const double r = refine(j);
    if (next) {
      start = r;
    } else {
      intervals.push_back({start, r});
    }
    inside = next;
  }
  if (inside) intervals.push_back({start, xs[m - 1]});

  // Tangential touches of the level set: local minima of gamma sitting at |g|.
  for (std::size_t j = 1; j + 1 < m; ++j) {
    if (!(fs[j] >= 0.0 && fs[j] <= fs[j - 1] && fs[j] <= fs[j + 1])) continue;
    if (fs[j] > 100.0 * opts.curve_tol) continue;
    const double xm = golden_min(fx, xs[j - 1], xs[j + 1]);
    if (std::abs(fx(xm)) <= opts.curve_tol) model.isolated_points.push_back(xm);
  }
  // Intervals too short to trace are also isolated real points.
  std::vector<Interval> kept;
  for (const auto& iv : intervals) {
    if (iv.hi - iv.lo <= 1e-9 * (1.0 + std::abs(iv.lo)))
      model.isolated_points.push_back(0.5 * (iv.lo + iv.hi));
    else
      kept.push_back(iv);
  }
  if (kept.empty()) return model;

  double total_len = 0.0;
  for (const auto& iv : kept) total_len += iv.hi - iv.lo;
  const double y_hi = reach + 1.0;  // Phi(x + iy) >= log y > level
  for (const auto& iv : kept) {
    const auto share = static_cast<std::size_t>(
        std::llround(static_cast<double>(opts.x_points) * (iv.hi - iv.lo) / total_len));
    const std::size_t np = std::max<std::size_t>(share, 8);
    Arc arc;
    arc.a = iv.lo;
    arc.a_prime = iv.hi;
    arc.points.resize(np);
    const double c = 0.5 * (iv.lo + iv.hi), h = 0.5 * (iv.hi - iv.lo);
    std::vector<bool> interior(np, false);
    for (std::size_t i = 0; i < np; ++i) {
      auto& p = arc.points[i];
      p.x = (i == 0) ? iv.lo
            : (i + 1 == np)
                ? iv.hi
                : c - h * std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(np - 1));
      if (i == 0 || i + 1 == np) continue;
      const double f0 = fx(p.x);
      if (f0 >= 0.0) continue;
      auto fy = [&](double y) { return f(cplx(p.x, y)); };
      const double ftop = fy(y_hi);
      p.y = illinois(fy, 0.0, y_hi, f0, ftop, 1e-2 * opts.curve_tol, 1e-15 * (1.0 + y_hi));
      if (p.y > 0.0) {
        const double res = std::abs(fy(p.y));
        model.max_curve_residual = std::max(model.max_curve_residual, res);
        p.rho = curve_density(ids, cplx(p.x, p.y));
        interior[i] = true;
      }
    }
    // Extrapolate rho to the real-axis endpoints along arc length.
    auto extrapolate = [&](std::size_t end, int dir) {
      std::vector<std::size_t> near;
      for (std::size_t k = end; near.size() < 2 && k < np; k += static_cast<std::size_t>(dir))
        if (interior[k]) near.push_back(k);
      if (near.empty()) return;
      const auto& p0 = arc.points[end];
      const auto& p1 = arc.points[near[0]];
      if (near.size() == 1) {
        arc.points[end].rho = p1.rho;
        return;
      }
      const auto& p2 = arc.points[near[1]];
      const double d1 = std::hypot(p1.x - p0.x, p1.y - p0.y);
      const double d2 = std::hypot(p2.x - p0.x, p2.y - p0.y);
      const double v = d2 > d1 ? p1.rho + (p1.rho - p2.rho) * d1 / (d2 - d1) : p1.rho;
      arc.points[end].rho = std::max(0.0, v);
    };
    for (std::size_t i = 0; i < np; ++i) {
      if (interior[i] || i == 0 || i + 1 == np) continue;
      // Interior x whose real-axis value is not below |g|: fold into the axis.
      arc.points[i].rho = 0.0;
    }
    extrapolate(0, 1);
    extrapolate(np - 1, -1);
    model.arcs.push_back(std::move(arc));
  }
  if (model.max_curve_residual > opts.curve_tol)
    model.warnings.push_back("curve residual " + fmt(model.max_curve_residual) + " exceeds tolerance");
  return model;
}

std::vector<Interval> real_support_sigma(const IdsEstimate& ids, double threshold, double tie_band) {
  const auto grid = ids.grid();
  auto f = [&](double x) { return phi(ids, cplx(x, 0.0)) - threshold; };
  std::vector<double> fn(grid.size());
  std::vector<bool> needed(grid.size(), false);
  for (std::size_t i = 0; i < ids.cells(); ++i)
    if (ids.cell_mass(i) > 0.0) needed[i] = needed[i + 1] = true;
  for (std::size_t i = 0; i < grid.size(); ++i) fn[i] = needed[i] ? f(grid[i]) : 0.0;

  std::vector<Interval> pieces;
  for (std::size_t i = 0; i < ids.cells(); ++i) {
    if (ids.cell_mass(i) <= 0.0) continue;
    const double a = grid[i], b = grid[i + 1];
    const bool ia = fn[i] > tie_band, ib = fn[i + 1] > tie_band;
    if (ia && ib) {
      pieces.push_back({a, b});
    } else if (ia || ib) {
      auto fs = [&](double x) { return f(x) - tie_band; };
      const double r = illinois(fs, a, b, fn[i] - tie_band, fn[i + 1] - tie_band, 0.0,
                                1e-14 * (1.0 + std::abs(a)));
      pieces.push_back(ia ? Interval{a, r} : Interval{r, b});
    }
  }
  std::vector<Interval> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, p.hi);
    else
      merged.push_back(p);
  }
  return merged;
}

namespace {

constexpr double kGlNode = 0.7745966692414834;
constexpr double kGlW0 = 8.0 / 9.0;
constexpr double kGlW1 = 5.0 / 9.0;

double ids_mass(const IdsEstimate& ids, const std::vector<Interval>& sigma) {
  double mass = 0.0;
  for (const auto& iv : sigma) mass += ids(iv.hi) - ids(iv.lo);
  return mass;
}

}  // namespace

CurveModel build_curve_model(const IdsEstimate& ids, const CurveParameters& params,
                             const CurveOptions& opts) {
  CurveModel model = trace_curve(ids, params, opts);
  model.sigma = real_support_sigma(ids, params.threshold, opts.tie_band);
  model.sigma_mass = ids_mass(ids, model.sigma);
  double arcs = 0.0;
  for (const auto& arc : model.arcs) arcs += arc.mass();
  model.arc_mass = 2.0 * arcs;
  return model;
}

double limit_measure_integral(const CurveModel& model, const TestFunction& f) {
  const auto grid = model.ids.grid();
  double acc = 0.0;
  for (const auto& iv : model.sigma) {
    const auto first = std::upper_bound(grid.begin(), grid.end(), iv.lo) - grid.begin();
    for (std::size_t i = first > 0 ? static_cast<std::size_t>(first - 1) : 0; i < model.ids.cells(); ++i) {
      const double a = std::max(grid[i], iv.lo), b = std::min(grid[i + 1], iv.hi);
      if (grid[i] >= iv.hi) break;
      if (b <= a) continue;
      const double density = model.ids.cell_mass(i) / (grid[i + 1] - grid[i]);
      if (density <= 0.0) continue;
      const double c = 0.5 * (a + b), d = 0.5 * (b - a) * kGlNode;
      const double s = kGlW1 * (f(cplx(c - d, 0.0)) + f(cplx(c + d, 0.0))) + kGlW0 * f(cplx(c, 0.0));
      acc += density * 0.5 * (b - a) * s;
    }
  }
  for (const auto& arc : model.arcs) {
    for (std::size_t i = 1; i < arc.points.size(); ++i) {
      const auto& p = arc.points[i - 1];
      const auto& q = arc.points[i];
      const double dl = std::hypot(q.x - p.x, q.y - p.y);
      const double fp = f(cplx(p.x, p.y)) + f(cplx(p.x, -p.y));
      const double fq = f(cplx(q.x, q.y)) + f(cplx(q.x, -q.y));
      acc += 0.5 * (fp * p.rho + fq * q.rho) * dl;
    }
  }
  return acc;
}

double empirical_integral(std::span<const cplx> eigenvalues, const TestFunction& f) {
  if (eigenvalues.empty()) throw ValidationError("empirical_integral: no eigenvalues");
  double acc = 0.0;
  for (const auto& z : eigenvalues) acc += f(z);
  return acc / static_cast<double>(eigenvalues.size());
}

TestFunction gaussian_bump(cplx center, double width) {
  if (!(width > 0.0)) throw ValidationError("gaussian_bump: width must be positive");
  return [center, width](cplx z) { return std::exp(-std::norm(z - center) / (2.0 * width * width)); };
}

TestFunction polynomial_with_cutoff(std::vector<double> coeffs, double radius) {
  if (!(radius > 0.0)) throw ValidationError("polynomial_with_cutoff: radius must be positive");
  return [coeffs = std::move(coeffs), radius](cplx z) {
    const double t = 1.0 - std::norm(z) / (radius * radius);
    if (t <= 0.0) return 0.0;
    double p = 0.0;
    cplx zk = 1.0;
    for (double c : coeffs) {
      p += c * zk.real();
      zk *= z;
    }
    return p * t * t;
  };
}

CriticalCouplings critical_couplings(const IdsEstimate& ids, double mean_log_c,
                                     std::size_t scan_points) {
  if (ids.cells() == 0) throw ValidationError("critical_couplings: empty IDS estimate");
  if (scan_points < 16) throw ValidationError("critical_couplings: scan_points must be >= 16");
  const ThoulessLyapunov gamma(ids, mean_log_c);
  auto gx = [&](double x) { return gamma(cplx(x, 0.0)); };
  const auto grid = ids.grid();
  auto in_support = [&](double x) {
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin() || it == grid.end()) return false;
    const auto i = static_cast<std::size_t>(it - grid.begin() - 1);
    if (ids.cell_mass(i) > 0.0) return true;
    return x == grid[i] && i > 0 && ids.cell_mass(i - 1) > 0.0;
  };
  // gamma increases away from the support on both sides, so its minimum and
  // the maximum over the support both lie in [lo, hi].
  const auto [lo, hi] = ids.support();
  std::vector<double> xs(scan_points), gs(scan_points);
  for (std::size_t j = 0; j < scan_points; ++j) {
    xs[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(scan_points - 1);
    gs[j] = gx(xs[j]);
  }
  std::size_t jmin = 0, jmax = 0;
  bool have_max = false;
  for (std::size_t j = 0; j < scan_points; ++j) {
    if (gs[j] < gs[jmin]) jmin = j;
    const bool supp = in_support(xs[j]) || j == 0 || j + 1 == scan_points;
    if (supp && (!have_max || gs[j] > gs[jmax])) {
      jmax = j;
      have_max = true;
    }
  }
  CriticalCouplings out;
  const std::size_t last = scan_points - 1;
  const double a = xs[jmin > 0 ? jmin - 1 : 0], b = xs[std::min(jmin + 1, last)];
  out.argmin = golden_min(gx, a, b);
  out.g1 = std::min(gx(out.argmin), gs[jmin]);
  if (out.g1 == gs[jmin]) out.argmin = xs[jmin];

  out.argmax = xs[jmax];
  out.g2 = gs[jmax];
  if (jmax > 0 && jmax < last && in_support(xs[jmax - 1]) && in_support(xs[jmax + 1])) {
    const double xm = golden_min([&](double x) { return -gx(x); }, xs[jmax - 1], xs[jmax + 1]);
    const double gm = gx(xm);
    if (gm > out.g2) {
      out.g2 = gm;
      out.argmax = xm;
    }
  }
  return out;
}

nlohmann::json to_json(const CurveModel& model) {
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& arc : model.arcs) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : arc.points) pts.push_back({p.x, p.y, p.rho});
    arcs.push_back({{"a", arc.a}, {"a_prime", arc.a_prime}, {"points", std::move(pts)}});
  }
  nlohmann::json sigma = nlohmann::json::array();
  for (const auto& iv : model.sigma) sigma.push_back({iv.lo, iv.hi});
  return {
      {"g", model.params.g},
      {"mean_log_c", model.params.mean_log_c},
      {"threshold", model.params.threshold},
      {"arcs", std::move(arcs)},
      {"isolated_points", model.isolated_points},
      {"sigma", std::move(sigma)},
      {"sigma_mass", model.sigma_mass},
      {"arc_mass", model.arc_mass},
      {"max_curve_residual", model.max_curve_residual},
      {"warnings", model.warnings},
      {"ids_hash", model.ids_hash},
      {"ids", to_json(model.ids, model.ids_hash)},
  };
}

CurveModel curve_from_json(const nlohmann::json& j) {
  try {
    CurveModel m;
    m.params.g = j.at("g").get<double>();
    m.params.mean_log_c = j.at("mean_log_c").get<double>();
    m.params.threshold = j.at("threshold").get<double>();
    for (const auto& a : j.at("arcs")) {
      Arc arc;
      arc.a = a.at("a").get<double>();
      arc.a_prime = a.at("a_prime").get<double>();
      for (const auto& p : a.at("points"))
        arc.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      m.arcs.push_back(std::move(arc));
    }
    m.isolated_points = j.at("isolated_points").get<std::vector<double>>();
    for (const auto& s : j.at("sigma")) m.sigma.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    m.sigma_mass = j.at("sigma_mass").get<double>();
    m.arc_mass = j.at("arc_mass").get<double>();
    m.max_curve_residual = j.value("max_curve_residual", 0.0);
    m.warnings = j.value("warnings", std::vector<std::string>{});
    m.ids = ids_from_json(j.at("ids"), &m.ids_hash);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("curve model: ") + e.what());
  }
}

}  // namespace hnlab
