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

#include "hnlab/lab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "hnlab/error.hpp"
#include "hnlab/lab/compare.hpp"
#include "hnlab/lab/verify.hpp"
#include "hnlab/parallel.hpp"
#include "hnlab/spectral_stats.hpp"

namespace hnlab::lab {

using nlohmann::json;

Context::Context(ExperimentConfig config, std::string out_dir, unsigned jobs)
    : config_(std::move(config)), hash_(config_hash(config_)), out_(std::move(out_dir)), jobs_(std::max(1u, jobs)) {}

std::string Context::path(const std::string& rel) const { return (std::filesystem::path(out_) / rel).string(); }

Meta Context::meta() const {
  return {{"config_hash", hash_}, {"seed", std::to_string(config_.ensemble.seed)}};
}

json Context::meta_json() const { return {{"config_hash", hash_}, {"seed", config_.ensemble.seed}}; }

void Context::record(const std::string& artifact_rel) { artifacts_.push_back(artifact_rel); }

namespace {

Meta with(Meta m, std::initializer_list<std::pair<std::string, std::string>> extra) {
  m.insert(m.end(), extra.begin(), extra.end());
  return m;
}

std::string method_name(SpectrumMethod m) { return m == SpectrumMethod::dense_qr ? "dense-qr" : "boundary-det"; }

void emit(Context& ctx, const std::string& rel, const std::string& text) {
  write_file(ctx.path(rel), text);
  ctx.record(rel);
}

void emit_json(Context& ctx, const std::string& rel, const json& j) {
  write_json(ctx.path(rel), j);
  ctx.record(rel);
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

bool is_circulant(const EnsembleSpec& s) {
  return s.coordinates == Coordinates::log && s.mode != SamplingMode::periodic && s.xi.is_constant() &&
         s.eta.is_constant() && s.q.is_constant();
}

std::vector<cplx> circulant_eigenvalues(const EnsembleSpec& s, std::size_t n) {
  const double p = std::exp(s.xi.mean()), r = std::exp(s.eta.mean()), q = s.q.mean();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    out[k] = q - r * w - p / w;
  }
  return out;
}

}  // namespace

std::string spectrum_file(std::size_t n, std::size_t rep) {
  return "spectra/n" + std::to_string(n) + "_r" + std::to_string(rep) + ".csv";
}

// ---------------------------------------------------------------------------
// Cached stages

IdsEstimate load_or_estimate_ids(Context& ctx, bool* cache_hit) {
  const auto& c = ctx.config();
  c.ensemble.require_finite_means("ids");
  const std::string key = ids_hash(c);
  const std::string rel = "ids/ids.json";
  if (file_exists(ctx.path(rel))) {
    const json j = read_json(ctx.path(rel));
    std::string stored;
    IdsEstimate ids = ids_from_json(j.at("ids"), &stored);
    if (stored == key) {
      if (cache_hit) *cache_hit = true;
      if (j.value("config_hash", "") != ctx.hash()) {
        json k = j;
        k["config_hash"] = ctx.hash();
        k["seed"] = c.ensemble.seed;
        write_json(ctx.path(rel), k);
      }
      ctx.record(rel);
      return ids;
    }
  }
  if (cache_hit) *cache_hit = false;
  IdsEstimate ids = estimate_ids(c.ensemble, c.ids.n, c.ids.reps, c.ids.grid_points, ctx.jobs());
  json j = ctx.meta_json();
  j["ids"] = to_json(ids, key);
  emit_json(ctx, rel, j);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < ids.grid().size(); ++i) rows.push_back({ids.grid()[i], ids.values()[i]});
  emit(ctx, "ids/ids.csv",
       csv_text(with(ctx.meta(), {{"ids_hash", key}, {"n", std::to_string(ids.n_used())},
                                  {"reps", std::to_string(ids.realizations_used())}}),
                {"lambda", "N"}, rows));
  return ids;
}

CurveModel load_or_build_curve(Context& ctx, bool* cache_hit) {
  const auto& c = ctx.config();
  const std::string rel = "curve/curve.json";
  bool ids_hit = false;
  IdsEstimate ids = load_or_estimate_ids(ctx, &ids_hit);
  const std::string key = ids_hash(c);
  if (file_exists(ctx.path(rel))) {
    const json j = read_json(ctx.path(rel));
    if (j.value("config_hash", "") == ctx.hash() && j.contains("model") &&
        j["model"].value("ids_hash", "") == key) {
      if (cache_hit) *cache_hit = true;
      ctx.record(rel);
      ctx.record("curve/arcs.csv");
      ctx.record("curve/sigma.csv");
      return curve_from_json(j.at("model"));
    }
  }
  if (cache_hit) *cache_hit = false;
  CurveModel model = build_curve_model(ids, curve_parameters(c.ensemble), c.curve);
  model.ids_hash = key;
  const auto cc = critical_couplings(ids, model.params.mean_log_c, c.curve.scan_points);
  json j = ctx.meta_json();
  j["critical_couplings"] = {{"g1", cc.g1}, {"g2", cc.g2}, {"argmin", cc.argmin}, {"argmax", cc.argmax}};
  j["model"] = to_json(model);
  emit_json(ctx, rel, j);

  std::vector<std::vector<double>> rows;
  for (std::size_t a = 0; a < model.arcs.size(); ++a)
    for (const auto& p : model.arcs[a].points) rows.push_back({static_cast<double>(a), p.x, p.y, p.rho});
  emit(ctx, "curve/arcs.csv",
       csv_text(with(ctx.meta(), {{"g", fmt(model.params.g)}, {"threshold", fmt(model.params.threshold)}}),
                {"arc", "x", "y", "rho"}, rows));
  rows.clear();
  for (const auto& iv : model.sigma) rows.push_back({iv.lo, iv.hi, ids(iv.hi) - ids(iv.lo)});
  emit(ctx, "curve/sigma.csv", csv_text(ctx.meta(), {"lo", "hi", "mass"}, rows));
  return model;
}

std::vector<SpectrumResult> load_or_compute_spectra(Context& ctx, std::size_t n, std::size_t reps) {
  std::vector<SpectrumResult> out(reps);
  std::vector<bool> have(reps, false);
  for (std::size_t r = 0; r < reps; ++r) {
    const std::string rel = spectrum_file(n, r);
    if (!file_exists(ctx.path(rel))) continue;
    const Csv csv = read_csv(ctx.path(rel));
    const auto it = csv.meta.find("config_hash");
    if (it == csv.meta.end() || it->second != ctx.hash())
      throw ValidationError(rel + ": config hash " + (it == csv.meta.end() ? "missing" : it->second) +
                            " does not match " + ctx.hash() + "; rerun `spectrum`");
    auto& s = out[r];
    s.n = n;
    s.realization = r;
    s.residual = std::stod(csv.meta.at("residual"));
    s.qr_iterations = std::stoul(csv.meta.at("qr_iterations"));
    for (const auto& row : csv.rows) s.eigenvalues.emplace_back(row.at(0), row.at(1));
    if (s.eigenvalues.size() != n) throw IoError(rel + ": expected " + std::to_string(n) + " eigenvalues");
    have[r] = true;
    ctx.record(rel);
  }
  std::vector<std::size_t> todo;
  for (std::size_t r = 0; r < reps; ++r)
    if (!have[r]) todo.push_back(r);
  const auto& spec = ctx.config().ensemble;
  parallel_for(todo.size(), ctx.jobs(), [&](std::size_t i) {
    const std::size_t r = todo[i];
    try {
      out[r] = spectrum(sample(spec, n, r));
    } catch (const QrFailure& e) {
      std::ostringstream os;
      os << e.what() << " (replay: seed " << spec.seed << ", n " << n << ", realization " << r << ")";
      throw NumericalError(os.str());
    }
  });
  for (std::size_t r : todo) {
    const auto& s = out[r];
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (const auto& z : s.eigenvalues) rows.push_back({z.real(), z.imag()});
    emit(ctx, spectrum_file(n, r),
         csv_text(with(ctx.meta(), {{"n", std::to_string(n)},
                                    {"realization", std::to_string(r)},
                                    {"method", method_name(s.method)},
                                    {"residual", fmt(s.residual)},
                                    {"qr_iterations", std::to_string(s.qr_iterations)}}),
                  {"re", "im"}, rows));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

std::string cmd_sample(Context& ctx) {
  const auto& c = ctx.config();
  std::ostringstream rep;
  json summary = ctx.meta_json();
  summary["files"] = json::array();
  for (std::size_t n : c.sizes) {
    for (std::size_t r = 0; r < c.reps; ++r) {
      const auto seq = sample(c.ensemble, n, r);
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k <= n; ++k)
        rows.push_back({static_cast<double>(k), seq.xi[k], seq.eta[k], seq.q[k]});
      const std::string rel = "samples/n" + std::to_string(n) + "_r" + std::to_string(r) + ".csv";
      const bool raw = seq.raw();
      emit(ctx, rel,
           csv_text(with(ctx.meta(), {{"n", std::to_string(n)},
                                      {"realization", std::to_string(r)},
                                      {"coordinates", raw ? "raw" : "log"}}),
                    {"k", raw ? "sub" : "xi", raw ? "super" : "eta", "q"}, rows));
      const auto m = empirical_means(seq);
      summary["files"].push_back({{"file", rel}, {"n", n}, {"realization", r},
                                  {"mean_xi", m.mean_xi}, {"mean_eta", m.mean_eta},
                                  {"mean_q_logabs", m.mean_q_logabs}});
      rep << rel << "  mean_xi " << fixed(m.mean_xi) << "  mean_eta " << fixed(m.mean_eta) << "\n";
      if (c.export_matrices) {
        const std::string base = "matrices/n" + std::to_string(n) + "_r" + std::to_string(r);
        const auto mm = with(ctx.meta(), {{"n", std::to_string(n)}, {"realization", std::to_string(r)}});
        emit(ctx, base + "_J.mtx", matrix_market_dense(dense_matrix(seq), mm));
        if (!raw) emit(ctx, base + "_H.mtx", matrix_market_jacobi(OperatorBundle::build(seq).reference(), mm));
      }
    }
  }
  if (c.ensemble.coordinates == Coordinates::log && !c.ensemble.xi.heavy_tailed() &&
      !c.ensemble.eta.heavy_tailed()) {
    const auto m = ensemble_moments(c.ensemble);
    summary["expected"] = {{"mean_xi", m.mean_xi}, {"mean_eta", m.mean_eta}, {"g", coupling_g(c.ensemble)}};
    rep << "expected  mean_xi " << fixed(m.mean_xi) << "  mean_eta " << fixed(m.mean_eta) << "  g "
        << fixed(coupling_g(c.ensemble)) << "\n";
  }
  emit_json(ctx, "samples/summary.json", summary);
  return rep.str();
}

std::string cmd_spectrum(Context& ctx) {
  const auto& c = ctx.config();
  std::ostringstream rep;
  json summary = ctx.meta_json();
  summary["imag_tol"] = c.imag_tol;
  summary["runs"] = json::array();
  rep << "n       rep  non-real  fraction   residual\n";
  for (std::size_t n : c.sizes) {
    // Always recompute: the spectrum stage is the producer of these files.
    for (std::size_t r = 0; r < c.reps; ++r) std::filesystem::remove(ctx.path(spectrum_file(n, r)));
    const auto results = load_or_compute_spectra(ctx, n, c.reps);
    for (std::size_t r = 0; r < c.reps; ++r) {
      const auto& s = results[r];
      std::size_t nonreal = 0;
      for (const auto& z : s.eigenvalues)
        if (std::abs(z.imag()) > c.imag_tol) ++nonreal;
      const double frac = static_cast<double>(nonreal) / static_cast<double>(n);
      json run = {{"file", spectrum_file(n, r)}, {"n", n}, {"realization", r}, {"non_real", nonreal},
                  {"non_real_fraction", frac}, {"residual", s.residual}, {"qr_iterations", s.qr_iterations}};
      if (n <= 16) {
        json ev = json::array();
        auto sorted = s.eigenvalues;
        std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
          return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
        });
        for (auto z : sorted) ev.push_back({z.real(), z.imag()});
        run["eigenvalues"] = ev;
      }
      if (is_circulant(c.ensemble))
        run["circulant_distance"] = multiset_distance(s.eigenvalues, circulant_eigenvalues(c.ensemble, n));
      summary["runs"].push_back(run);
      char line[160];
      std::snprintf(line, sizeof line, "%-7zu %-4zu %-9zu %-10.4f %.3g\n", n, r, nonreal, frac, s.residual);
      rep << line;
      if (run.contains("circulant_distance"))
        rep << "        circulant reference distance " << run["circulant_distance"].get<double>() << "\n";
    }
  }
  emit_json(ctx, "spectra/summary.json", summary);
  return rep.str();
}

std::string cmd_ids(Context& ctx) {
  bool hit = false;
  const auto ids = load_or_estimate_ids(ctx, &hit);
  std::ostringstream rep;
  rep << (hit ? "ids: reused cache" : "ids: estimated") << " (n " << ids.n_used() << ", reps "
      << ids.realizations_used() << ", " << ids.grid().size() << " grid points)\n";
  rep << "support [" << fixed(ids.support()[0]) << ", " << fixed(ids.support()[1]) << "]\n";
  return rep.str();
}

std::vector<cplx> default_lyapunov_points() {
  return {{1.0, 1.0}, {-1.0, 0.5}, {0.5, 2.0}, {2.0, 0.3}, {0.0, 0.2}, {3.0, 0.0}};
}

std::string cmd_lyapunov(Context& ctx) {
  const auto& c = ctx.config();
  c.ensemble.require_finite_means("lyapunov");
  const auto zs = c.lyapunov.points.empty() ? default_lyapunov_points() : c.lyapunov.points;
  const auto ids = load_or_estimate_ids(ctx);
  const double mlc = curve_parameters(c.ensemble).mean_log_c;
  const auto est = lyapunov_transfer(c.ensemble, c.lyapunov.n, c.lyapunov.reps, zs, ctx.jobs());
  std::vector<std::vector<double>> rows;
  std::ostringstream rep;
  rep << "z                     transfer   stderr     thouless   |diff|\n";
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double th = lyapunov_thouless(ids, mlc, zs[i]);
    rows.push_back({zs[i].real(), zs[i].imag(), est[i].gamma_hat, est[i].std_error, th,
                    est[i].real_axis_warning ? 1.0 : 0.0});
    char line[200];
    std::snprintf(line, sizeof line, "%8.4f%+8.4fi     %-10.6f %-10.2e %-10.6f %.2e%s\n", zs[i].real(),
                  zs[i].imag(), est[i].gamma_hat, est[i].std_error, th, std::abs(th - est[i].gamma_hat),
                  est[i].real_axis_warning ? "  (real z: transfer estimate not uniform)" : "");
    rep << line;
  }
  emit(ctx, "lyapunov/lyapunov.csv",
       csv_text(with(ctx.meta(), {{"n", std::to_string(c.lyapunov.n)}, {"reps", std::to_string(c.lyapunov.reps)}}),
                {"re", "im", "gamma_transfer", "std_error", "gamma_thouless", "real_axis_warning"}, rows));
  return rep.str();
}

std::string cmd_curve(Context& ctx) {
  bool hit = false;
  const auto model = load_or_build_curve(ctx, &hit);
  std::ostringstream rep;
  rep << (hit ? "curve: reused cache\n" : "curve: traced\n");
  rep << "g " << fixed(model.params.g) << "  threshold " << fixed(model.params.threshold) << "\n";
  rep << "arcs " << model.arcs.size() << "\n";
  for (const auto& a : model.arcs)
    rep << "  [" << fixed(a.a) << ", " << fixed(a.a_prime) << "]  points " << a.points.size() << "  mass "
        << fixed(2.0 * a.mass()) << "\n";
  rep << "sigma intervals " << model.sigma.size() << "  mass " << fixed(model.sigma_mass) << "\n";
  rep << "total mass " << fixed(model.total_mass()) << "\n";
  if (!model.isolated_points.empty()) rep << "isolated real points " << model.isolated_points.size() << "\n";
  for (const auto& w : model.warnings) rep << "warning: " << w << "\n";
  return rep.str();
}

ExperimentConfig resolve_config(const RunOptions& opts) {
  if (opts.config_path.empty()) throw ValidationError("--config is required");
  if (!file_exists(opts.config_path)) throw ValidationError("config file not found: " + opts.config_path);
  json j;
  try {
    j = json::parse(read_file(opts.config_path));
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + opts.config_path + ": " + e.what());
  }
  // A manifest carries the resolved config it was produced from.
  if (j.is_object() && j.contains("stages") && j.contains("config")) j = j["config"];
  ExperimentConfig c = config_from_json(j);
  if (opts.seed_override) c.ensemble.seed = *opts.seed_override;
  return c;
}

void update_manifest(const Context& ctx, const std::string& stage, double seconds) {
  const std::string path = ctx.path("manifest.json");
  json m;
  if (file_exists(path)) {
    try {
      m = read_json(path);
    } catch (const Error&) {
      m = json();
    }
    if (!m.is_object() || m.value("config_hash", "") != ctx.hash()) m = json();
  }
  if (m.is_null()) {
    m = {{"tool_version", kToolVersion},
         {"config_hash", ctx.hash()},
         {"seed", ctx.config().ensemble.seed},
         {"config", to_json(ctx.config())},
         {"stages", json::object()}};
  }
  std::vector<std::string> arts = ctx.artifacts();
  std::sort(arts.begin(), arts.end());
  arts.erase(std::unique(arts.begin(), arts.end()), arts.end());
  m["stages"][stage] = {{"artifacts", arts}, {"wall_time_s", seconds}};
  write_json(path, m);
}

}  // namespace

RunResult run_command(const std::string& command, const RunOptions& opts) {
  RunResult res;
  try {
    static const std::vector<std::string> known{"sample", "spectrum", "ids", "lyapunov", "curve", "verify", "compare"};
    if (std::find(known.begin(), known.end(), command) == known.end())
      throw ValidationError("unknown command: " + command);
    if (opts.out_dir.empty()) throw ValidationError("--out is required");
    Context ctx(resolve_config(opts), opts.out_dir, opts.jobs);
    const auto t0 = std::chrono::steady_clock::now();
    if (command == "sample") {
      res.report = cmd_sample(ctx);
    } else if (command == "spectrum") {
      res.report = cmd_spectrum(ctx);
    } else if (command == "ids") {
      res.report = cmd_ids(ctx);
    } else if (command == "lyapunov") {
      res.report = cmd_lyapunov(ctx);
    } else if (command == "curve") {
      res.report = cmd_curve(ctx);
    } else if (command == "verify") {
      res = cmd_verify(ctx);
    } else {
      res = cmd_compare(ctx);
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    update_manifest(ctx, command, dt);
    res.report = "config " + ctx.hash() + "  seed " + std::to_string(ctx.config().ensemble.seed) + "\n" + res.report;
  } catch (const Error& e) {
    res.status = static_cast<int>(e.kind());
    res.report = e.what();
  } catch (const std::exception& e) {
    res.status = static_cast<int>(ErrorKind::numerical);
    res.report = std::string("internal error: ") + e.what();
  }
  return res;
}

}  // namespace hnlab::lab
