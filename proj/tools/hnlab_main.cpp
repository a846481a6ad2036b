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

// hnlab command-line front end. Talks to the library only through hnlab.h.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hnlab/hnlab.h"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of random non-Hermitian tridiagonal (Hatano-Nelson) matrices"};
  app.set_version_flag("--version", std::string(hnl_version()));
  app.require_subcommand(1);

  Args args;
  const std::pair<const char*, const char*> commands[] = {
      {"sample", "draw coefficient sequences"},
      {"spectrum", "eigenvalues of J_n per size and realization"},
      {"ids", "integrated density of states of the symmetric reference"},
      {"lyapunov", "transfer-matrix and Thouless Lyapunov exponents"},
      {"curve", "limit curve, real support and densities"},
      {"verify", "run the invariant battery"},
      {"compare", "empirical spectra against the limit measure"},
  };
  CLI::Option* seed_opts[std::size(commands)];
  std::size_t i = 0;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "run config (JSON) or a manifest.json to replay")->required();
    sub->add_option("--out", args.out, "output directory")->required();
    seed_opts[i++] = sub->add_option("--seed-override", args.seed, "replace the config seed");
    sub->add_option("--jobs", args.jobs, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : HNL_ERR_VALIDATION;
  }

  std::string command;
  bool has_seed = false;
  for (i = 0; i < std::size(commands); ++i)
    if (app.got_subcommand(commands[i].first)) {
      command = commands[i].first;
      has_seed = seed_opts[i]->count() > 0;
    }

  hnl_run_options opts{};
  opts.config_path = args.config.c_str();
  opts.out_dir = args.out.c_str();
  opts.has_seed_override = has_seed ? 1 : 0;
  opts.seed_override = args.seed;
  opts.jobs = args.jobs;
  const hnl_status st = hnl_run(command.c_str(), &opts);
  if (st == HNL_OK || st == HNL_ERR_VERIFICATION) {
    std::cout << hnl_last_report();
  }
  if (st != HNL_OK) std::cerr << "hnlab " << command << ": " << (st == HNL_ERR_VERIFICATION ? "verification failed" : hnl_last_error()) << "\n";
  return static_cast<int>(st);
}
