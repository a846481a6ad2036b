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

/* Exercises the public header from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "hnlab/hnlab.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static const char* kFree =
    "{\"seed\": 5, \"xi\": -0.5, \"eta\": 0.5, \"q\": 0}";

int main(void) {
  hnl_ensemble* e = NULL;
  EXPECT(hnl_ensemble_from_json(kFree, &e) == HNL_OK);

  double g = 0.0, mlc = 1.0;
  EXPECT(hnl_ensemble_coupling(e, &g, &mlc) == HNL_OK);
  EXPECT(fabs(g - 0.5) < 1e-15);
  EXPECT(fabs(mlc) < 1e-15);

  /* constant coefficients: the spectrum is the ellipse z = -e^{0.5} w - e^{-0.5} / w */
  hnl_sequence* s = NULL;
  EXPECT(hnl_sample(e, 16, 0, &s) == HNL_OK);
  EXPECT(hnl_sequence_size(s) == 16);
  hnl_spectrum* sp = NULL;
  EXPECT(hnl_spectrum_compute(s, &sp) == HNL_OK);
  EXPECT(hnl_spectrum_size(sp) == 16);
  double re[16], im[16];
  EXPECT(hnl_spectrum_values(sp, re, im) == HNL_OK);
  for (int i = 0; i < 16; ++i) {
    const double a = 2.0 * cosh(0.5), b = 2.0 * sinh(0.5);
    EXPECT(fabs(re[i] * re[i] / (a * a) + im[i] * im[i] / (b * b) - 1.0) < 1e-10);
  }
  EXPECT(hnl_spectrum_residual(sp) < 1e-10);

  double log_d = 0.0, log_h = 0.0;
  EXPECT(hnl_log_det(s, 0.3, 0.2, &log_d, &log_h) == HNL_OK);
  EXPECT(isfinite(log_d) && isfinite(log_h));

  hnl_ids* ids = NULL;
  EXPECT(hnl_ids_estimate(e, 2000, 1, 513, 1, &ids) == HNL_OK);
  EXPECT(fabs(hnl_ids_eval(ids, 0.0) - 0.5) < 0.01);
  double phi3 = 0.0;
  EXPECT(hnl_ids_log_potential(ids, 3.0, 0.0, &phi3) == HNL_OK);
  EXPECT(fabs(phi3 - 0.962424) < 5e-3);
  double sre = 1.0, sim = 0.0;
  EXPECT(hnl_ids_stieltjes(ids, 0.0, 1.0, &sre, &sim) == HNL_OK);
  EXPECT(fabs(sre) < 5e-3 && fabs(sim - 1.0 / sqrt(5.0)) < 5e-3);

  hnl_curve* c = NULL;
  EXPECT(hnl_curve_build(e, ids, &c) == HNL_OK);
  EXPECT(hnl_curve_arc_count(c) == 1);
  EXPECT(hnl_curve_sigma_count(c) == 0);
  double a = 0.0, a2 = 0.0;
  size_t pts = 0;
  EXPECT(hnl_curve_arc(c, 0, &a, &a2, &pts) == HNL_OK);
  EXPECT(fabs(a2 - 2.0 * cosh(0.5)) < 5e-3 && pts > 10);
  double sm = 0.0, am = 0.0;
  EXPECT(hnl_curve_mass(c, &sm, &am) == HNL_OK);
  EXPECT(fabs(sm + am - 1.0) < 0.01);
  EXPECT(hnl_curve_arc(c, 7, &a, &a2, &pts) != HNL_OK);

  /* error reporting */
  hnl_ensemble* bad = NULL;
  EXPECT(hnl_ensemble_from_json("{\"xi\": 0}", &bad) == HNL_ERR_VALIDATION);
  EXPECT(bad == NULL);
  EXPECT(strlen(hnl_last_error()) > 0);
  EXPECT(hnl_ensemble_from_json("not json", &bad) == HNL_ERR_VALIDATION);
  EXPECT(hnl_sample(NULL, 4, 0, &s) == HNL_ERR_VALIDATION);
  EXPECT(hnl_ensemble_from_json(kFree, &bad) == HNL_OK);
  EXPECT(strlen(hnl_last_error()) == 0);
  hnl_ensemble_free(bad);

  hnl_run_options opts;
  memset(&opts, 0, sizeof opts);
  opts.config_path = "/nonexistent/config.json";
  opts.out_dir = "/tmp/hnlab_capi_unused";
  EXPECT(hnl_run("spectrum", &opts) == HNL_ERR_VALIDATION);
  EXPECT(hnl_run("fly", &opts) == HNL_ERR_VALIDATION);

  hnl_curve_free(c);
  hnl_ids_free(ids);
  hnl_spectrum_free(sp);
  hnl_sequence_free(s);
  hnl_ensemble_free(e);
  if (failures == 0) printf("capi: all expectations met (%s)\n", hnl_version());
  return failures == 0 ? 0 : 1;
}
