// Copyright 2026 The schurstate Authors
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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "schurstate/errors.hpp"

namespace {

// 0 ok, 1 invalid input, 2 no convergence, 3 precondition not met.
int exit_status(const std::exception& e) {
  using namespace schurstate;
  if (dynamic_cast<const ConvergenceError*>(&e)) return 2;
  if (dynamic_cast<const PreconditionError*>(&e)) return 3;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using schurstate::cli::Options;
  Options o;
  CLI::App app{"Superposition states built from Schur product kernels"};
  app.require_subcommand(1);

  auto model = [&](CLI::App* c) {
    c->add_option("--model", o.model, "Model file (JSON)")->required();
  };
  auto observable = [&](CLI::App* c) {
    c->add_option("--observable", o.observable, "Observable file (JSON)");
    c->add_option("--region", o.region,
                  "Region \"x1,y1;x2,y2\"; identity factors unless --observable is given");
  };
  auto common = [&](CLI::App* c) {
    c->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--tol", o.tol, "Tolerance of the command's main check");
    c->add_option("--tail-tol", o.tail_tol, "Certified tail bound for boundary products");
    c->add_option("--seed", o.seed, "Seed for every randomized step");
    c->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* ck = app.add_subcommand("check-kernel", "Choi and Property-S report");
  model(ck);
  common(ck);
  ck->add_option("--region", o.region, "Sites to certify (default: first three)");
  ck->add_option("--samples", o.samples, "Random observables for Property S (1..4)");

  auto* ev = app.add_subcommand("eval", "Finite-volume value, dense and Schur paths");
  model(ev);
  observable(ev);
  common(ev);
  ev->add_option("--outer", o.outer, "Region Lambda1 containing the observable");

  auto* lm = app.add_subcommand("limit", "Boundary matrix and limit state");
  model(lm);
  observable(lm);
  common(lm);
  lm->add_flag("--check-projectivity", o.check_projectivity,
               "Compare with the limit on a larger region");
  lm->add_option("--outer", o.outer, "Larger region for the projectivity check");

  auto* hg = app.add_subcommand("homog", "Homogeneous overlaps and limits");
  model(hg);
  observable(hg);
  common(hg);
  hg->add_option("--sizes", o.sizes, "Comma-separated finite volumes |Lambda1|");

  auto* ms = app.add_subcommand("mixing-scan", "Mixing gaps over t and embeddings");
  model(ms);
  common(ms);
  ms->add_option("--observable", o.observable, "Observable a (JSON)")->required();
  ms->add_option("--observable-b", o.observable_b, "Observable b (JSON)")->required();
  ms->add_option("--t-list", o.t_list, "Comma-separated clearances t");
  ms->add_option("--tmax", o.tmax, "Scan t = 5, 10, 20, ... up to this value");
  ms->add_option("--strategies", o.strategies, "translate,random[:seed]");

  auto* st = app.add_subcommand("selftest", "Seeded invariant suite");
  common(st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  // mixing-scan prints CSV unless asked otherwise.
  if (ms->parsed() && ms->count("--format") == 0) o.format = "csv";

  try {
    if (ck->parsed()) return schurstate::cli::check_kernel(o, std::cout);
    if (ev->parsed()) return schurstate::cli::eval(o, std::cout);
    if (lm->parsed()) return schurstate::cli::limit(o, std::cout);
    if (hg->parsed()) return schurstate::cli::homog(o, std::cout);
    if (ms->parsed()) return schurstate::cli::mixing_scan(o, std::cout);
    if (st->parsed()) return schurstate::cli::selftest(o, std::cout);
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "schurstate: error: " << e.what() << '\n';
    return exit_status(e);
  }
  return 1;
}
