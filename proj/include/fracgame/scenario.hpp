// Copyright 2026 The fracgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRACGAME_SCENARIO_HPP_
#define FRACGAME_SCENARIO_HPP_

// Scenario configuration and the verification-suite runner that sits behind
// the command-line front end.
//
// A scenario is a strict JSON document: unknown keys are rejected with a
// line-anchored message (a typo in a parameter name must never silently run
// with a default), every parameter window is validated before any
// computation starts, and the effective seed is part of the canonical echo,
// so each emitted report carries a digest of the exact inputs that produced
// it.
//
// run_scenario executes one suite and writes three artifacts into the
// output directory:
//
//   summary.json   canonical config echo, pass/fail counts, suite extras
//   reports.jsonl  one CheckReport per line, deterministic order
//   trace.csv      plot-ready trace (trajectory, library, or scan surface)
//
// Suites: validate | simulate | value | lemmas | viscosity | doubling.
// Independent trials may run on a worker pool; results are merged in trial
// order, so the bytes written never depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracgame/dynamics.hpp"
#include "fracgame/fraccalc.hpp"
#include "fracgame/paths.hpp"
#include "fracgame/testfunc.hpp"

namespace fracgame {

struct ScenarioConfig {
  double T = 1.0;  // required in JSON; everything else has a default
  double alpha = 0.5;
  double beta = -1.0;  // negative means "defaulted": min(1-alpha, alpha/2)/2
  double epsilon = 0.5;  // separation scale of the doubled-distance functional
  std::size_t fine_cells = 64;
  std::size_t decision_steps = 2;
  std::string catalog_id = "pursuit_1d";
  // Coefficients for linear_scalar / decoupled_2d (ignored by pursuit_1d).
  double dyn_a = 0.0;
  double dyn_b = 1.0;
  double dyn_c = -1.0;
  double dyn_d = 0.0;
  double dyn_e_u = 0.0;
  double dyn_e_v = 0.0;
  std::string sigma = "coordinate";  // coordinate | norm
  std::vector<double> p_grid = {-1.0, 1.0};
  std::vector<double> q_grid = {-1.0, 1.0};
  std::size_t library_count = 4;
  double library_k = 2.0;
  std::vector<double> eps_list = {1e-1, 1e-2, 1e-3};
  double theta = 0.25;  // horizon margin for the gradient-envelope checks
  std::uint64_t seed = 20260823;
  std::size_t trials = 60;
  std::string out_dir = "out";

  // Parses and fully validates a config document.  `origin` names the
  // source (usually the file path) and prefixes every diagnostic; parse
  // errors, unknown keys, and type errors carry 1-based line numbers.
  // Throws ConfigError.
  static ScenarioConfig from_json_text(const std::string& text,
                                       const std::string& origin);
  static ScenarioConfig from_file(const std::string& path);

  // Canonical echo: every field, resolved defaults included, sorted keys.
  nlohmann::json to_json() const;
  // Hex digest over the echo minus out_dir (where results are written must
  // not change what they say).
  std::string digest() const;

  double beta_or_default() const;
  std::shared_ptr<const Grid> make_grid() const;
  GameDynamics make_dynamics() const;
  NuParams make_nu_params() const;
};

// Explicit product-integration Euler for  ^C D^alpha y = lambda y,
// y(0) = y0, on a uniform grid with `cells` cells over [0, T]; returns
// y(T).  The piecewise-constant derivative is integrated exactly, so the
// only error is freezing y at the left node of each cell.
double caputo_linear_euler(double alpha, double lambda, double y0,
                           std::size_t cells, double T);

// Runs one suite (see the header comment) and returns 0 when every report
// passes, 1 otherwise.  Throws ConfigError and friends for rejected
// configurations and numerical failures; run_suite_exit maps those to the
// process codes.  `workers` <= 1 means single-threaded.
int run_scenario(const std::string& subcommand, const ScenarioConfig& config,
                 const std::string& out_dir, std::size_t workers);

// Front-end entry: loads `config_path`, applies the optional seed and
// output overrides, runs the suite, and maps every failure mode onto the
// process exit codes (0 pass, 1 check failures, 2 bad configuration,
// 3 numerical failure).  On nonzero return, `*message` (when non-null)
// receives the diagnostic.
int run_suite_exit(const std::string& subcommand,
                   const std::string& config_path, const std::string& out_dir,
                   const std::uint64_t* seed_override, std::size_t workers,
                   std::string* message);

}  // namespace fracgame

#endif  // FRACGAME_SCENARIO_HPP_
