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

#include "hnlab/ensemble.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hnlab/error.hpp"
#include "hnlab/rng.hpp"

namespace hnlab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ValidationError(field + ": " + msg);
}

// Antiderivative of log(u): u log u - u, with the u -> 0 limit.
double log_primitive(double u) { return u > 0.0 ? u * std::log(u) - u : 0.0; }

enum Field : std::uint32_t { kXi = 0, kEta = 1, kQ = 2 };

}  // namespace

std::string DistributionSpec::kind_name() const {
  return std::visit(Overloaded{
                        [](const dist::Constant&) { return std::string("constant"); },
                        [](const dist::Uniform&) { return std::string("uniform"); },
                        [](const dist::TwoPoint&) { return std::string("two_point"); },
                        [](const dist::Gaussian&) { return std::string("gaussian"); },
                        [](const dist::Cauchy&) { return std::string("cauchy"); },
                        [](const dist::LogUniform&) { return std::string("log_uniform"); },
                    },
                    v_);
}

void DistributionSpec::validate(const std::string& field) const {
  std::visit(Overloaded{
                 [&](const dist::Constant& d) { require(finite(d.value), field, "value must be finite"); },
                 [&](const dist::Uniform& d) {
                   require(finite(d.lo) && finite(d.hi), field, "bounds must be finite");
                   require(d.lo < d.hi, field, "uniform requires lo < hi");
                 },
                 [&](const dist::TwoPoint& d) {
                   require(finite(d.first) && finite(d.second), field, "values must be finite");
                   require(d.prob_first >= 0.0 && d.prob_first <= 1.0, field,
                           "two_point requires 0 <= prob <= 1");
                 },
                 [&](const dist::Gaussian& d) {
                   require(finite(d.mean) && finite(d.sd), field, "parameters must be finite");
                   require(d.sd >= 0.0, field, "gaussian requires sd >= 0");
                 },
                 [&](const dist::Cauchy& d) {
                   require(finite(d.loc) && finite(d.scale), field, "parameters must be finite");
                   require(d.scale > 0.0, field, "cauchy requires scale > 0");
                 },
                 [&](const dist::LogUniform& d) {
                   require(finite(d.lo) && finite(d.hi), field, "bounds must be finite");
                   require(d.lo >= 0.0 && d.hi > d.lo, field, "log_uniform requires 0 <= lo < hi");
                 },
             },
             v_);
}

double DistributionSpec::mean() const {
  return std::visit(Overloaded{
                        [](const dist::Constant& d) { return d.value; },
                        [](const dist::Uniform& d) { return 0.5 * (d.lo + d.hi); },
                        [](const dist::TwoPoint& d) {
                          return d.prob_first * d.first + (1.0 - d.prob_first) * d.second;
                        },
                        [](const dist::Gaussian& d) { return d.mean; },
                        [](const dist::Cauchy&) -> double {
                          throw ValidationError("cauchy law has no finite mean");
                        },
                        [](const dist::LogUniform& d) {
                          return (log_primitive(d.hi) - log_primitive(d.lo)) / (d.hi - d.lo);
                        },
                    },
                    v_);
}

double DistributionSpec::draw(std::uint64_t w0, std::uint64_t w1) const {
  const double u = unit_interval(w0);
  return std::visit(
      Overloaded{
          [](const dist::Constant& d) { return d.value; },
          [u](const dist::Uniform& d) { return d.lo + (d.hi - d.lo) * u; },
          [u](const dist::TwoPoint& d) { return u < d.prob_first ? d.first : d.second; },
          [u, w1](const dist::Gaussian& d) {
            // Box-Muller; 1 - u lies in (0, 1].
            const double radius = std::sqrt(-2.0 * std::log(1.0 - u));
            return d.mean + d.sd * radius * std::cos(2.0 * std::numbers::pi * unit_interval(w1));
          },
          [u](const dist::Cauchy& d) {
            return d.loc + d.scale * std::tan(std::numbers::pi * (u - 0.5));
          },
          [u](const dist::LogUniform& d) {
            const double x = std::max(d.lo + (d.hi - d.lo) * u, std::numeric_limits<double>::min());
            return std::log(x);
          },
      },
      v_);
}

void EnsembleSpec::validate() const {
  if (mode == SamplingMode::periodic) {
    require(!table.empty(), "mode.table", "periodic mode needs a non-empty table");
    for (const auto& row : table)
      for (double v : row) require(finite(v), "mode.table", "entries must be finite");
    return;
  }
  xi.validate("xi");
  eta.validate("eta");
  q.validate("q");
  if (coordinates == Coordinates::log) {
    require(!xi.heavy_tailed(), "xi", "cauchy is admissible for q only (E xi must be finite)");
    require(!eta.heavy_tailed(), "eta", "cauchy is admissible for q only (E eta must be finite)");
  }
}

void EnsembleSpec::require_finite_means(const std::string& operation) const {
  if (coordinates == Coordinates::raw)
    throw ValidationError(operation + ": raw-coordinate ensembles support spectrum sampling only");
  if (mode != SamplingMode::periodic && (xi.heavy_tailed() || eta.heavy_tailed()))
    throw ValidationError(operation + ": heavy-tailed xi/eta law rejected");
}

CoefficientSequence sample(const EnsembleSpec& spec, std::size_t n, std::uint64_t stream) {
  if (n < 1) throw ValidationError("n: must be >= 1");
  spec.validate();
  CoefficientSequence seq;
  seq.n = n;
  seq.spec = spec;
  seq.stream = stream;
  seq.xi.resize(n + 1);
  seq.eta.resize(n + 1);
  seq.q.resize(n + 1);

  if (spec.mode == SamplingMode::periodic) {
    const std::size_t period = spec.table.size();
    for (std::size_t k = 0; k <= n; ++k) {
      const auto& row = spec.table[k % period];
      seq.xi[k] = row[0];
      seq.eta[k] = row[1];
      seq.q[k] = row[2];
    }
    return seq;
  }

  auto draw = [&](const DistributionSpec& d, std::uint64_t k, Field f) {
    const auto w = random_words(spec.seed, stream, k, f);
    return d.draw(w.first, w.second);
  };
  for (std::size_t k = 0; k <= n; ++k) {
    const std::uint64_t index = spec.mode == SamplingMode::constant ? 0 : k;
    seq.xi[k] = draw(spec.xi, index, kXi);
    seq.eta[k] = draw(spec.eta, index, kEta);
    seq.q[k] = draw(spec.q, index, kQ);
  }
  return seq;
}

EmpiricalMeans empirical_means(const CoefficientSequence& seq) {
  if (seq.n == 0) throw ValidationError("empirical_means: empty sequence");
  EmpiricalMeans m;
  for (std::size_t k = 0; k < seq.n; ++k) {
    m.mean_xi += seq.xi[k];
    m.mean_eta += seq.eta[k];
    m.mean_q_logabs += std::log1p(std::abs(seq.q[k]));
  }
  const double inv = 1.0 / static_cast<double>(seq.n);
  m.mean_xi *= inv;
  m.mean_eta *= inv;
  m.mean_q_logabs *= inv;
  return m;
}

EnsembleMoments ensemble_moments(const EnsembleSpec& spec) {
  spec.validate();
  spec.require_finite_means("ensemble_moments");
  EnsembleMoments m;
  if (spec.mode == SamplingMode::periodic) {
    for (const auto& row : spec.table) {
      m.mean_xi += row[0];
      m.mean_eta += row[1];
    }
    m.mean_xi /= static_cast<double>(spec.table.size());
    m.mean_eta /= static_cast<double>(spec.table.size());
    return m;
  }
  m.mean_xi = spec.xi.mean();
  m.mean_eta = spec.eta.mean();
  return m;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const DistributionSpec& d) {
  using nlohmann::json;
  return std::visit(
      Overloaded{
          [](const dist::Constant& x) { return json{{"kind", "constant"}, {"value", x.value}}; },
          [](const dist::Uniform& x) { return json{{"kind", "uniform"}, {"lo", x.lo}, {"hi", x.hi}}; },
          [](const dist::TwoPoint& x) {
            return json{{"kind", "two_point"}, {"first", x.first}, {"second", x.second},
                        {"prob_first", x.prob_first}};
          },
          [](const dist::Gaussian& x) {
            return json{{"kind", "gaussian"}, {"mean", x.mean}, {"sd", x.sd}};
          },
          [](const dist::Cauchy& x) {
            return json{{"kind", "cauchy"}, {"loc", x.loc}, {"scale", x.scale}};
          },
          [](const dist::LogUniform& x) {
            return json{{"kind", "log_uniform"}, {"lo", x.lo}, {"hi", x.hi}};
          },
      },
      d.variant());
}

namespace {

double number(const nlohmann::json& j, const char* key, const std::string& field) {
  if (!j.contains(key)) throw ValidationError(field + "." + key + ": missing");
  if (!j.at(key).is_number()) throw ValidationError(field + "." + key + ": must be a number");
  return j.at(key).get<double>();
}

}  // namespace

DistributionSpec distribution_from_json(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return dist::Constant{j.get<double>()};
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError(field + ": expected an object with a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  DistributionSpec d;
  if (kind == "constant") {
    d = dist::Constant{number(j, "value", field)};
  } else if (kind == "uniform") {
    d = dist::Uniform{number(j, "lo", field), number(j, "hi", field)};
  } else if (kind == "two_point") {
    d = dist::TwoPoint{number(j, "first", field), number(j, "second", field),
                       number(j, "prob_first", field)};
  } else if (kind == "gaussian") {
    d = dist::Gaussian{number(j, "mean", field), number(j, "sd", field)};
  } else if (kind == "cauchy") {
    d = dist::Cauchy{number(j, "loc", field), number(j, "scale", field)};
  } else if (kind == "log_uniform") {
    d = dist::LogUniform{number(j, "lo", field), number(j, "hi", field)};
  } else {
    throw ValidationError(field + ".kind: unknown distribution '" + kind + "'");
  }
  d.validate(field);
  return d;
}

nlohmann::json to_json(const EnsembleSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["coordinates"] = spec.coordinates == Coordinates::log ? "log" : "raw";
  switch (spec.mode) {
    case SamplingMode::iid: j["mode"] = "iid"; break;
    case SamplingMode::constant: j["mode"] = "constant"; break;
    case SamplingMode::periodic:
      j["mode"] = {{"kind", "periodic"}, {"period", spec.table.size()}, {"table", spec.table}};
      break;
  }
  if (spec.mode != SamplingMode::periodic) {
    j["xi"] = to_json(spec.xi);
    j["eta"] = to_json(spec.eta);
    j["q"] = to_json(spec.q);
  }
  return j;
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("ensemble: expected an object");
  EnsembleSpec spec;
  // a signed integer node holding a non-negative value is accepted as well
  if (!j.contains("seed") || !j.at("seed").is_number_integer() ||
      (!j.at("seed").is_number_unsigned() && j.at("seed").get<std::int64_t>() < 0))
    throw ValidationError("ensemble.seed: mandatory unsigned integer");
  spec.seed = j.at("seed").get<std::uint64_t>();

  const auto coords = j.value("coordinates", std::string("log"));
  if (coords == "log") spec.coordinates = Coordinates::log;
  else if (coords == "raw") spec.coordinates = Coordinates::raw;
  else throw ValidationError("ensemble.coordinates: expected 'log' or 'raw'");

  const nlohmann::json mode = j.value("mode", nlohmann::json("iid"));
  const std::string mode_kind =
      mode.is_string() ? mode.get<std::string>() : mode.value("kind", std::string());
  if (mode_kind == "iid") {
    spec.mode = SamplingMode::iid;
  } else if (mode_kind == "constant") {
    spec.mode = SamplingMode::constant;
  } else if (mode_kind == "periodic") {
    spec.mode = SamplingMode::periodic;
    if (!mode.is_object() || !mode.contains("table"))
      throw ValidationError("ensemble.mode.table: periodic mode needs a table");
    try {
      spec.table = mode.at("table").get<std::vector<std::array<double, 3>>>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("ensemble.mode.table: expected rows [xi, eta, q]");
    }
    if (mode.contains("period") && mode.at("period").get<std::size_t>() != spec.table.size())
      throw ValidationError("ensemble.mode.period: does not match table length");
  } else {
    throw ValidationError("ensemble.mode: expected iid, constant or periodic");
  }

  if (spec.mode != SamplingMode::periodic) {
    for (const char* f : {"xi", "eta", "q"})
      if (!j.contains(f)) throw ValidationError(std::string("ensemble.") + f + ": missing");
    spec.xi = distribution_from_json(j.at("xi"), "ensemble.xi");
    spec.eta = distribution_from_json(j.at("eta"), "ensemble.eta");
    spec.q = distribution_from_json(j.at("q"), "ensemble.q");
  }
  spec.validate();
  return spec;
}

}  // namespace hnlab
