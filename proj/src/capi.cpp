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

#include "hnlab/hnlab.h"

#include <string>

#include <json.hpp>

#include "hnlab/curves.hpp"
#include "hnlab/eig.hpp"
#include "hnlab/ensemble.hpp"
#include "hnlab/error.hpp"
#include "hnlab/lab/pipeline.hpp"
#include "hnlab/spectral_stats.hpp"

struct hnl_ensemble {
  hnlab::EnsembleSpec spec;
};
struct hnl_sequence {
  hnlab::CoefficientSequence seq;
};
struct hnl_spectrum {
  hnlab::SpectrumResult result;
};
struct hnl_ids {
  hnlab::IdsEstimate ids;
};
struct hnl_curve {
  hnlab::CurveModel model;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_report;

// Runs f, translating exceptions into a status and the thread's error text.
template <class F>
hnl_status guarded(F&& f) {
  try {
    g_error.clear();
    f();
    return HNL_OK;
  } catch (const hnlab::Error& e) {
    g_error = e.what();
    return static_cast<hnl_status>(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_error = e.what();
    return HNL_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return HNL_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return HNL_ERR_NUMERICAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw hnlab::ValidationError(std::string("null argument: ") + what);
}

}  // namespace

extern "C" {

const char* hnl_version(void) { return hnlab::lab::kToolVersion; }
const char* hnl_last_error(void) { return g_error.c_str(); }
const char* hnl_last_report(void) { return g_report.c_str(); }

hnl_status hnl_ensemble_from_json(const char* json, hnl_ensemble** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    auto spec = hnlab::ensemble_from_json(nlohmann::json::parse(json));
    spec.validate();
    *out = new hnl_ensemble{std::move(spec)};
  });
}

void hnl_ensemble_free(hnl_ensemble* e) { delete e; }

hnl_status hnl_ensemble_coupling(const hnl_ensemble* e, double* g, double* mean_log_c) {
  return guarded([&] {
    require(e, "ensemble");
    const auto p = hnlab::curve_parameters(e->spec);
    if (g) *g = p.g;
    if (mean_log_c) *mean_log_c = p.mean_log_c;
  });
}

hnl_status hnl_sample(const hnl_ensemble* e, size_t n, uint64_t stream, hnl_sequence** out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    *out = new hnl_sequence{hnlab::sample(e->spec, n, stream)};
  });
}

hnl_status hnl_sequence_from_arrays(size_t n, const double* xi, const double* eta, const double* q,
                                    hnl_sequence** out) {
  return guarded([&] {
    require(xi, "xi");
    require(eta, "eta");
    require(q, "q");
    require(out, "out");
    if (n < 2) throw hnlab::ValidationError("n must be at least 2");
    hnlab::CoefficientSequence s;
    s.n = n;
    s.xi.assign(xi, xi + n + 1);
    s.eta.assign(eta, eta + n + 1);
    s.q.assign(q, q + n + 1);
    s.spec.mode = hnlab::SamplingMode::constant;
    *out = new hnl_sequence{std::move(s)};
  });
}

void hnl_sequence_free(hnl_sequence* s) { delete s; }

size_t hnl_sequence_size(const hnl_sequence* s) { return s ? s->seq.n : 0; }

hnl_status hnl_sequence_coefficients(const hnl_sequence* s, double* xi, double* eta, double* q) {
  return guarded([&] {
    require(s, "sequence");
    for (std::size_t k = 0; k <= s->seq.n; ++k) {
      if (xi) xi[k] = s->seq.xi[k];
      if (eta) eta[k] = s->seq.eta[k];
      if (q) q[k] = s->seq.q[k];
    }
  });
}

hnl_status hnl_log_det(const hnl_sequence* s, double re, double im, double* log_abs_d, double* log_abs_det_h) {
  return guarded([&] {
    require(s, "sequence");
    const auto b = hnlab::OperatorBundle::build(s->seq);
    const hnlab::cplx z(re, im);
    if (log_abs_d) *log_abs_d = hnlab::rank2_det(b, z).log_abs;
    if (log_abs_det_h) *log_abs_det_h = hnlab::log_det_shifted(b.reference(), z).log_abs;
  });
}

hnl_status hnl_finite_lyapunov(const hnl_sequence* s, double re, double im, double* gamma) {
  return guarded([&] {
    require(s, "sequence");
    require(gamma, "gamma");
    *gamma = hnlab::finite_lyapunov(hnlab::OperatorBundle::build(s->seq), {re, im});
  });
}

hnl_status hnl_spectrum_compute(const hnl_sequence* s, hnl_spectrum** out) {
  return guarded([&] {
    require(s, "sequence");
    require(out, "out");
    *out = new hnl_spectrum{hnlab::spectrum(s->seq)};
  });
}

void hnl_spectrum_free(hnl_spectrum* sp) { delete sp; }

size_t hnl_spectrum_size(const hnl_spectrum* sp) { return sp ? sp->result.eigenvalues.size() : 0; }

hnl_status hnl_spectrum_values(const hnl_spectrum* sp, double* re, double* im) {
  return guarded([&] {
    require(sp, "spectrum");
    for (std::size_t i = 0; i < sp->result.eigenvalues.size(); ++i) {
      if (re) re[i] = sp->result.eigenvalues[i].real();
      if (im) im[i] = sp->result.eigenvalues[i].imag();
    }
  });
}

double hnl_spectrum_residual(const hnl_spectrum* sp) { return sp ? sp->result.residual : 0.0; }

hnl_status hnl_ids_estimate(const hnl_ensemble* e, size_t n, size_t reps, size_t grid_points, unsigned jobs,
                            hnl_ids** out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    *out = new hnl_ids{hnlab::estimate_ids(e->spec, n, reps, grid_points, jobs == 0 ? 1 : jobs)};
  });
}

void hnl_ids_free(hnl_ids* ids) { delete ids; }

double hnl_ids_eval(const hnl_ids* ids, double lambda) { return ids ? ids->ids(lambda) : 0.0; }

hnl_status hnl_ids_support(const hnl_ids* ids, double* lo, double* hi) {
  return guarded([&] {
    require(ids, "ids");
    const auto s = ids->ids.support();
    if (lo) *lo = s[0];
    if (hi) *hi = s[1];
  });
}

hnl_status hnl_ids_log_potential(const hnl_ids* ids, double re, double im, double* value) {
  return guarded([&] {
    require(ids, "ids");
    require(value, "value");
    *value = hnlab::phi(ids->ids, {re, im});
  });
}

hnl_status hnl_ids_stieltjes(const hnl_ids* ids, double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require(ids, "ids");
    const auto s = hnlab::stieltjes(ids->ids, {re, im});
    if (out_re) *out_re = s.real();
    if (out_im) *out_im = s.imag();
  });
}

hnl_status hnl_lyapunov_transfer(const hnl_ensemble* e, size_t n, size_t reps, double re, double im, unsigned jobs,
                                 double* gamma, double* std_error) {
  return guarded([&] {
    require(e, "ensemble");
    const auto est = hnlab::lyapunov_transfer(e->spec, n, reps, hnlab::cplx(re, im), jobs == 0 ? 1 : jobs);
    if (gamma) *gamma = est.gamma_hat;
    if (std_error) *std_error = est.std_error;
  });
}

hnl_status hnl_lyapunov_thouless(const hnl_ids* ids, double mean_log_c, double re, double im, double* gamma) {
  return guarded([&] {
    require(ids, "ids");
    require(gamma, "gamma");
    *gamma = hnlab::lyapunov_thouless(ids->ids, mean_log_c, {re, im});
  });
}

hnl_status hnl_curve_build(const hnl_ensemble* e, const hnl_ids* ids, hnl_curve** out) {
  return guarded([&] {
    require(e, "ensemble");
    require(ids, "ids");
    require(out, "out");
    *out = new hnl_curve{hnlab::build_curve_model(ids->ids, hnlab::curve_parameters(e->spec))};
  });
}

void hnl_curve_free(hnl_curve* c) { delete c; }

size_t hnl_curve_arc_count(const hnl_curve* c) { return c ? c->model.arcs.size() : 0; }

hnl_status hnl_curve_arc(const hnl_curve* c, size_t k, double* a, double* a_prime, size_t* points) {
  return guarded([&] {
    require(c, "curve");
    const auto& arc = c->model.arcs.at(k);
    if (a) *a = arc.a;
    if (a_prime) *a_prime = arc.a_prime;
    if (points) *points = arc.points.size();
  });
}

hnl_status hnl_curve_arc_point(const hnl_curve* c, size_t k, size_t j, double* x, double* y, double* rho) {
  return guarded([&] {
    require(c, "curve");
    const auto& p = c->model.arcs.at(k).points.at(j);
    if (x) *x = p.x;
    if (y) *y = p.y;
    if (rho) *rho = p.rho;
  });
}

size_t hnl_curve_sigma_count(const hnl_curve* c) { return c ? c->model.sigma.size() : 0; }

hnl_status hnl_curve_sigma_interval(const hnl_curve* c, size_t k, double* lo, double* hi) {
  return guarded([&] {
    require(c, "curve");
    const auto& iv = c->model.sigma.at(k);
    if (lo) *lo = iv.lo;
    if (hi) *hi = iv.hi;
  });
}

hnl_status hnl_curve_mass(const hnl_curve* c, double* sigma_mass, double* arc_mass) {
  return guarded([&] {
    require(c, "curve");
    if (sigma_mass) *sigma_mass = c->model.sigma_mass;
    if (arc_mass) *arc_mass = c->model.arc_mass;
  });
}

hnl_status hnl_curve_distance(const hnl_curve* c, double re, double im, double* distance) {
  return guarded([&] {
    require(c, "curve");
    require(distance, "distance");
    *distance = c->model.distance_to_curve({re, im});
  });
}

hnl_status hnl_curve_gaussian_integral(const hnl_curve* c, double center_re, double center_im, double width,
                                       double* value) {
  return guarded([&] {
    require(c, "curve");
    require(value, "value");
    if (!(width > 0.0)) throw hnlab::ValidationError("width must be positive");
    *value = hnlab::limit_measure_integral(c->model, hnlab::gaussian_bump({center_re, center_im}, width));
  });
}

hnl_status hnl_critical_couplings(const hnl_ids* ids, double mean_log_c, double* g1, double* g2) {
  return guarded([&] {
    require(ids, "ids");
    const auto cc = hnlab::critical_couplings(ids->ids, mean_log_c);
    if (g1) *g1 = cc.g1;
    if (g2) *g2 = cc.g2;
  });
}

hnl_status hnl_run(const char* command, const hnl_run_options* opts) {
  g_report.clear();
  hnl_status status = HNL_OK;
  const hnl_status guard = guarded([&] {
    require(command, "command");
    require(opts, "options");
    hnlab::lab::RunOptions o;
    o.config_path = opts->config_path ? opts->config_path : "";
    o.out_dir = opts->out_dir ? opts->out_dir : "";
    if (opts->has_seed_override) o.seed_override = opts->seed_override;
    o.jobs = opts->jobs == 0 ? 1 : opts->jobs;
    const auto res = hnlab::lab::run_command(command, o);
    g_report = res.report;
    status = static_cast<hnl_status>(res.status);
    if (status != HNL_OK) g_error = res.report;
  });
  return guard != HNL_OK ? guard : status;
}

}  // extern "C"
